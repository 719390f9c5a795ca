//! Initial-state specifications.
//!
//! ```text
//! e | s | a | g                 collective basis states
//! product(Q, Q)                 Q = 0 | 1 | + | - | bloch:THETA:PHI
//! PATH.json                     density matrix file
//! ```
//!
//! A JSON file holds `{"basis": "canonical" | "collective", "re": [[..]], "im": [[..]]}`
//! with row-major 4×4 arrays; `im` may be omitted.

use std::path::Path;

use serde::Deserialize;
use squeezed_core::{Basis, DensityMatrix, Op4, Qubit, C64};

use crate::error::{CliError, CliResult};

pub fn parse(spec: &str) -> CliResult<DensityMatrix> {
    let s = spec.trim();
    match s {
        "e" => return Ok(DensityMatrix::excited()),
        "s" => return Ok(DensityMatrix::symmetric()),
        "a" => return Ok(DensityMatrix::antisymmetric()),
        "g" => return Ok(DensityMatrix::ground()),
        _ => {}
    }
    if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
        let (l, r) = inner
            .split_once(',')
            .ok_or_else(|| CliError::usage(format!("product state needs two factors: `{s}`")))?;
        return Ok(DensityMatrix::product(&qubit(l)?, &qubit(r)?));
    }
    if s.ends_with(".json") {
        return from_file(Path::new(s));
    }
    Err(CliError::usage(format!(
        "unknown initial state `{s}` (expected e, s, a, g, product(Q,Q) or a .json file)"
    )))
}

fn qubit(token: &str) -> CliResult<Qubit> {
    let t = token.trim();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match t {
        "1" => Qubit::excited(),
        "0" => Qubit::ground(),
        "+" => Qubit::new(C64::new(h, 0.0), C64::new(h, 0.0)),
        "-" => Qubit::new(C64::new(-h, 0.0), C64::new(h, 0.0)),
        _ => {
            let mut parts = t.split(':');
            let angles = match (parts.next(), parts.next(), parts.next(), parts.next()) {
                (Some("bloch"), Some(th), Some(ph), None) => th.parse::<f64>().ok().zip(ph.parse::<f64>().ok()),
                _ => None,
            };
            let (theta, phi) =
                angles.ok_or_else(|| CliError::usage(format!("bad qubit `{t}` (0, 1, +, - or bloch:THETA:PHI)")))?;
            Qubit::bloch(theta, phi)
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    basis: BasisName,
    re: [[f64; 4]; 4],
    #[serde(default)]
    im: [[f64; 4]; 4],
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum BasisName {
    Canonical,
    Collective,
}

fn from_file(path: &Path) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    from_json(&text).map_err(|e| match e {
        CliError::Usage(msg) => CliError::usage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn from_json(text: &str) -> CliResult<DensityMatrix> {
    let f: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::usage(e.to_string()))?;
    let m = Op4::from_fn(|i, j| C64::new(f.re[i][j], f.im[i][j]));
    let basis = match f.basis {
        BasisName::Canonical => Basis::Canonical,
        BasisName::Collective => Basis::Collective,
    };
    Ok(DensityMatrix::new(m, basis)?)
}
