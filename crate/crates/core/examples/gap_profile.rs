//! Spectral gap along a transverse-field path and the resulting run-time estimate.

use aqclab::adiabatic::{adiabatic_time_estimate, gap_profile, susceptibility, InterpolationPath};
use aqclab::models::IsingInstance;

pub fn main() -> aqclab::Result<()> {
    let inst = IsingInstance::new(3, [((0, 1), 1.0), ((1, 2), 1.0), ((0, 2), -0.5)], vec![0.3, 0.0, -0.2])?;
    let path = InterpolationPath::transverse_field(&inst, 1.0)?;
    let profile = gap_profile(&path, 51)?;
    let (s_min, g_min) = profile.min_gap().expect("non-empty grid");
    println!("min gap {g_min:.6} at s = {s_min:.2}");
    println!("max |⟨1|dH/ds|0⟩| = {:.6}", profile.max_matrix_element().unwrap_or(0.0));
    println!("τ estimate = {:.4}", adiabatic_time_estimate(&profile)?);
    println!(
        "χ_0 at s_min = {:.4}",
        susceptibility(&path, 0, s_min.clamp(0.01, 0.99), 1e-3)?
    );
    print!(
        "{}",
        profile.to_csv().lines().step_by(10).collect::<Vec<_>>().join("\n")
    );
    println!();
    Ok(())
}
