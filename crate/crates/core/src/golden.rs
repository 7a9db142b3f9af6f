//! Worked-example fixtures and the self-test checks built on them.
//!
//! The fixture: N = 14 items, M = 4 right nodes of degree 7, left degree 2,
//! t = 1 over GF(8), defectives {0, 3, 9} (0-based).

use crate::bch::{self, BchSpec, RootMethod};
use crate::codec::{self, SignatureMatrix, TestVector};
use crate::density::c_of_t;
use crate::graph::BiRegularGraph;

/// Right-node neighbor lists, 0-based.
pub const EXAMPLE_RIGHT_ADJ: [[usize; 7]; 4] = [
    [0, 2, 4, 6, 8, 10, 13],
    [1, 2, 5, 7, 9, 11, 13],
    [1, 3, 5, 6, 9, 10, 12],
    [0, 3, 4, 7, 8, 11, 12],
];

pub const EXAMPLE_SUPPORT: [usize; 3] = [0, 3, 9];

pub const H1: [[u8; 7]; 3] = [[0, 0, 1, 0, 1, 1, 1], [0, 1, 0, 1, 1, 1, 0], [1, 0, 0, 1, 0, 1, 1]];

/// The 16 x 14 measurement matrix, one 4-row block per right node.
pub const EXAMPLE_A: [[u8; 14]; 16] = [
    [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1],
    [0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1],
    [0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1],
    [0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1],
    [0, 1, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0],
    [1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0],
];

/// Observation blocks for [`EXAMPLE_SUPPORT`].
pub const EXAMPLE_Z: [[u32; 4]; 4] = [[1, 0, 0, 1], [1, 1, 1, 0], [2, 1, 2, 0], [2, 0, 1, 1]];

/// Published (t, c(t), ℓ*) values.
pub const C_TABLE: [(usize, f64, usize); 8] = [
    (1, 1.222, 3),
    (2, 0.597, 2),
    (3, 0.388, 2),
    (4, 0.294, 2),
    (5, 0.239, 2),
    (6, 0.202, 2),
    (7, 0.176, 2),
    (8, 0.156, 2),
];

pub const C_TOLERANCE: f64 = 0.01;

pub fn example_graph() -> BiRegularGraph {
    let adj = EXAMPLE_RIGHT_ADJ.iter().map(|r| r.to_vec()).collect();
    BiRegularGraph::from_right_adjacency(14, 2, adj, 0).expect("fixture graph is valid")
}

pub fn h1() -> Vec<Vec<u8>> {
    H1.iter().map(|r| r.to_vec()).collect()
}

/// [1 1 ... 1; H1].
pub fn signature_u() -> Vec<Vec<u8>> {
    std::iter::once(vec![1; 7]).chain(h1()).collect()
}

pub fn example_a() -> Vec<Vec<u8>> {
    EXAMPLE_A.iter().map(|r| r.to_vec()).collect()
}

/// Full y, including the count-all slot.
pub fn example_test_vector() -> Vec<u32> {
    let mut y = vec![EXAMPLE_SUPPORT.len() as u32];
    y.extend(EXAMPLE_Z.iter().flatten());
    y
}

/// Parses rows of 0/1 separated by whitespace; blank and `#` lines skipped.
pub fn parse_bit_rows(text: &str) -> Result<Vec<Vec<u8>>, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|tok| match tok {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(format!("expected 0 or 1, got {other:?}")),
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub result: Result<(), String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

fn compare<T: PartialEq + std::fmt::Debug>(what: &str, got: &T, want: &T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what} mismatch: got {got:?}, expected {want:?}"))
    }
}

/// Parity columns of the length-7, t = 1 code against `expected`.
pub fn check_h1(expected: &[Vec<u8>]) -> Result<(), String> {
    let spec = BchSpec::new(3, 1, 7).map_err(|e| e.to_string())?;
    compare("H1", &bch::build_parity_columns(&spec).rows(), &expected.to_vec())
}

pub fn check_signature() -> Result<(), String> {
    let sig = SignatureMatrix::build(1, 7).map_err(|e| e.to_string())?;
    compare("U", &sig.rows(), &signature_u())
}

pub fn check_measurement_matrix() -> Result<(), String> {
    let sig = SignatureMatrix::build(1, 7).map_err(|e| e.to_string())?;
    let a = codec::measurement_matrix(&example_graph(), &sig).map_err(|e| e.to_string())?;
    compare("A", &a, &example_a())
}

pub fn check_encode() -> Result<(), String> {
    let sig = SignatureMatrix::build(1, 7).map_err(|e| e.to_string())?;
    let y = codec::encode(&example_graph(), &sig, &EXAMPLE_SUPPORT).map_err(|e| e.to_string())?;
    compare("y", &y.0, &example_test_vector())
}

pub fn check_decode() -> Result<(), String> {
    let sig = SignatureMatrix::build(1, 7).map_err(|e| e.to_string())?;
    let y = TestVector(example_test_vector());
    for method in [RootMethod::Chien, RootMethod::Direct] {
        let opts = codec::DecoderOptions {
            root_method: method,
            shuffle_seed: None,
        };
        let out = codec::decode_with(&example_graph(), &sig, &y, opts).map_err(|e| e.to_string())?;
        compare("recovered set", &out.recovered, &EXAMPLE_SUPPORT.to_vec())?;
        compare("peeling rounds", &out.iterations, &2)?;
        if !out.success {
            return Err("decode reported failure".into());
        }
    }
    Ok(())
}

/// Spot checks of c(t) at t = 1, 2, 4.
pub fn check_c_table() -> Result<(), String> {
    for &(t, c, ell) in C_TABLE.iter().filter(|(t, _, _)| [1, 2, 4].contains(t)) {
        let got = c_of_t(t);
        if (got.c - c).abs() > C_TOLERANCE || got.ell_star != ell {
            return Err(format!(
                "c({t}) = {:.4} at ell {}, expected {c} at ell {ell}",
                got.c, got.ell_star
            ));
        }
    }
    Ok(())
}

/// All self-test checks. `h1_override` replaces the built-in H1 fixture.
pub fn run_checks(h1_override: Option<&[Vec<u8>]>) -> Vec<Check> {
    let h1 = h1_override.map(<[Vec<u8>]>::to_vec).unwrap_or_else(h1);
    vec![
        Check {
            name: "parity-check matrix H1",
            result: check_h1(&h1),
        },
        Check {
            name: "signature matrix U",
            result: check_signature(),
        },
        Check {
            name: "measurement matrix A",
            result: check_measurement_matrix(),
        },
        Check {
            name: "encode worked example",
            result: check_encode(),
        },
        Check {
            name: "decode worked example",
            result: check_decode(),
        },
        Check {
            name: "c(t) spot checks",
            result: check_c_table(),
        },
    ]
}
