//! Line-oriented circuit format.
//!
//! ```text
//! # comment
//! qubits 2
//! h 0
//! cnot 0 1
//! unitary 1 | 0 1 1 0
//! unitary 1 0 | 1 0 0 0  0 1 0 0  0 0 0 1  0 0 1 0
//! ```
//!
//! The header must come first. Named gates are `i x y z h s t` on one target
//! and `cnot`/`cx`, `cz`, `swap` on two. `unitary` takes its targets, a `|`,
//! and the row-major entries; complex entries look like `0.5`, `-i`, `1e-3+2i`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::circuit::QuantumCircuit;
use super::gate::Gate;

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

pub fn parse_complex(text: &str) -> Option<C64> {
    let Some(body) = text.strip_suffix('i') else {
        return text.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().ok()?,
    };
    Some(C64::new(re.parse::<f64>().ok()?, im))
}

pub fn parse_circuit(text: &str) -> Result<QuantumCircuit> {
    let mut circuit: Option<QuantumCircuit> = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let name = head.to_ascii_lowercase();
        let Some(c) = circuit.as_mut() else {
            if name != "qubits" {
                return Err(err(line_no, col, "expected `qubits N` header"));
            }
            let &(ncol, ntext) = toks.get(1).ok_or_else(|| err(line_no, col, "missing qubit count"))?;
            let n: usize = ntext
                .parse()
                .map_err(|_| err(line_no, ncol, format!("invalid qubit count {ntext:?}")))?;
            if toks.len() > 2 {
                return Err(err(line_no, toks[2].0, "unexpected token after qubit count"));
            }
            circuit = Some(QuantumCircuit::new(n).map_err(|e| err(line_no, ncol, e.to_string()))?);
            continue;
        };
        if name == "qubits" {
            return Err(err(line_no, col, "duplicate `qubits` header"));
        }
        let (target_toks, entry_toks) = match toks.iter().position(|&(_, t)| t == "|") {
            Some(p) => (&toks[1..p], Some(&toks[p + 1..])),
            None => (&toks[1..], None),
        };
        let mut targets = Vec::new();
        for &(tcol, t) in target_toks {
            let q: usize = t
                .parse()
                .map_err(|_| err(line_no, tcol, format!("invalid qubit index {t:?}")))?;
            if q >= c.n_qubits() {
                return Err(err(
                    line_no,
                    tcol,
                    format!("qubit {q} out of range for {} qubits", c.n_qubits()),
                ));
            }
            targets.push(q);
        }
        let arity = |want: usize| -> Result<()> {
            if targets.len() != want {
                Err(err(
                    line_no,
                    col,
                    format!("`{name}` takes {want} target(s), got {}", targets.len()),
                ))
            } else if entry_toks.is_some() {
                Err(err(line_no, col, format!("`{name}` takes no matrix entries")))
            } else {
                Ok(())
            }
        };
        let gate = match name.as_str() {
            "i" | "x" | "y" | "z" | "h" | "s" | "t" => {
                arity(1)?;
                let q = targets[0];
                match name.as_str() {
                    "i" => Gate::identity(q),
                    "x" => Gate::x(q),
                    "y" => Gate::y(q),
                    "z" => Gate::z(q),
                    "h" => Gate::h(q),
                    "s" => Gate::s(q),
                    _ => Gate::t(q),
                }
            }
            "cnot" | "cx" | "cz" | "swap" => {
                arity(2)?;
                let (a, b) = (targets[0], targets[1]);
                if a == b {
                    return Err(err(line_no, col, "two-qubit gate targets must differ"));
                }
                match name.as_str() {
                    "cz" => Gate::cz(a, b),
                    "swap" => Gate::swap(a, b),
                    _ => Gate::cnot(a, b),
                }
            }
            "unitary" => {
                let entries = entry_toks.ok_or_else(|| err(line_no, col, "`unitary` needs `|` and entries"))?;
                if !(1..=2).contains(&targets.len()) {
                    return Err(err(line_no, col, "`unitary` takes 1 or 2 targets"));
                }
                let dim = 1 << targets.len();
                if entries.len() != dim * dim {
                    return Err(err(
                        line_no,
                        col,
                        format!("expected {} entries, got {}", dim * dim, entries.len()),
                    ));
                }
                let mut values = Vec::with_capacity(dim * dim);
                for &(ecol, e) in entries {
                    values.push(
                        parse_complex(e).ok_or_else(|| err(line_no, ecol, format!("invalid complex number {e:?}")))?,
                    );
                }
                Gate::new("unitary", DMatrix::from_row_slice(dim, dim, &values), targets)
                    .map_err(|e| err(line_no, col, e.to_string()))?
            }
            _ => return Err(err(line_no, col, format!("unknown gate {head:?}"))),
        };
        c.push(gate).map_err(|e| err(line_no, col, e.to_string()))?;
    }
    circuit.ok_or_else(|| err(text.lines().count().max(1), 1, "missing `qubits N` header"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::StateVector;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5"), Some(C64::new(0.5, 0.0)));
        assert_eq!(parse_complex("-i"), Some(C64::new(0.0, -1.0)));
        assert_eq!(parse_complex("i"), Some(C64::new(0.0, 1.0)));
        assert_eq!(parse_complex("1e-3+2i"), Some(C64::new(1e-3, 2.0)));
        assert_eq!(parse_complex("1-2.5i"), Some(C64::new(1.0, -2.5)));
        assert_eq!(parse_complex("2e+1i"), Some(C64::new(0.0, 20.0)));
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn parses_named_and_explicit_gates() {
        let text = "# bell\nqubits 2\nh 0\ncnot 0 1\nunitary 1 | 1 0 0 1\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 3);
        let out = c.output(&StateVector::basis(4, 0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((out.amplitudes()[3].re - r).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("h 0\n", 1, 1),
            ("qubits 2\nfoo 0\n", 2, 1),
            ("qubits 2\nh 5\n", 2, 3),
            ("qubits 1\nunitary 0 | 1 0 0 zz\n", 2, 19),
            ("qubits 1\nunitary 0 | 1 1 0 1\n", 2, 1),
            ("qubits 2\n  cnot 0\n", 2, 3),
            ("", 1, 1),
        ];
        for (text, line, column) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text:?}")
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
