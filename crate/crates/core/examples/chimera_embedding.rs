//! Minor-embedding a logical graph into Chimera hardware and decoding the result.

use aqclab::chimera::{embed_instance, find_embedding, unembed, ChimeraGraph, CouplerPlacement, EmbedOptions};
use aqclab::models::{brute_force_ground, edges, gen_spin_glass, CostFunction, CouplingRange, SpinConfiguration};

pub fn main() -> aqclab::Result<()> {
    let big = ChimeraGraph::new(8, 8)?;
    println!("8×8 Chimera: {} vertices, {} edges", big.len(), big.edges().len());

    let hw = ChimeraGraph::new(2, 2)?;
    let n = 5;
    let logical = gen_spin_glass(n, &edges::complete(n), CouplingRange::PlusMinusOne, 9)?;
    let emb = find_embedding(n, &logical.edges(), &hw, &EmbedOptions::default())?;
    emb.validate(n, &logical.edges(), &hw)?;
    let stats = emb.stats();
    println!(
        "K{n} in 2×2: {} physical spins, longest chain {}",
        stats.physical, stats.max_chain
    );
    print!("{}", emb.to_text());

    let embedded = embed_instance(&logical, &emb, &hw, None, CouplerPlacement::First)?;
    println!(
        "physical problem: {} spins, chain strength {}",
        embedded.instance.n(),
        embedded.chain_strength
    );
    let physical = brute_force_ground(&CostFunction::ising(embedded.instance.clone()))?;
    let decoded = unembed(&physical.minimizers[0], &embedded, &logical)?;
    let truth = brute_force_ground(&CostFunction::ising(logical.clone()))?;
    println!(
        "decoded {:?} with energy {} (logical ground {})",
        decoded.spins(),
        logical.energy(&decoded)?,
        truth.energy
    );
    let reembedded: SpinConfiguration = embedded.embed_config(&decoded)?;
    println!("re-embedded physical energy {}", embedded.instance.energy(&reembedded)?);
    Ok(())
}
