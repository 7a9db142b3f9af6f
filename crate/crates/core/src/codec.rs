//! Measurement design, encoding and the peeling decoder.
//!
//! Test layout: slot 0 of the test vector counts all defectives; right node i
//! owns slots `1 + i*s .. 1 + (i+1)*s`. Within a node, slot 0 counts the
//! node's defectives and the remaining t*b slots carry integer sums of BCH
//! parity-check bits.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bch::{self, BchSpec, ParityColumns, RootMethod, MAX_T};
use crate::density::{c_of_t, lambda_threshold};
use crate::error::CodecError;
use crate::graph::BiRegularGraph;

/// Left degree selection for [`DesignParams::derive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllChoice {
    /// ℓ* from the density-evolution optimum.
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for EllChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(EllChoice::Auto);
        }
        s.parse::<usize>()
            .map(EllChoice::Fixed)
            .map_err(|_| format!("invalid left degree {s:?} (integer or \"auto\")"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub ell: usize,
    pub beta: f64,
    /// c(t) at the optimal left degree.
    pub c_t: f64,
    /// ℓ / λ_T(ℓ) for the chosen ℓ; equals `c_t` when ℓ = ℓ*.
    pub load_ratio: f64,
    /// Right nodes M.
    pub right_nodes: usize,
    /// ⌈Nℓ/M⌉.
    pub r_max: usize,
    /// BCH field degree b.
    pub field_degree: u32,
    /// Tests per right node, t*b + 1.
    pub tests_per_node: usize,
    /// M*s + 1, including the count-all test.
    pub total_tests: usize,
}

impl DesignParams {
    /// Sizes the scheme for N items and K defectives:
    /// M = ⌈(ℓ/λ_T(ℓ)) K β⌉.
    pub fn derive(n: usize, k: usize, t: usize, ell: EllChoice, beta: f64) -> Result<Self, CodecError> {
        check_counts(n, k, t)?;
        if beta.is_nan() || beta <= 1.0 || beta.is_infinite() {
            return Err(CodecError::Beta(beta));
        }
        let cc = c_of_t(t);
        let (ell, load_ratio) = match ell {
            EllChoice::Auto => (cc.ell_star, cc.c),
            EllChoice::Fixed(e) if e < 2 => return Err(CodecError::LeftDegree(e)),
            EllChoice::Fixed(e) if e == cc.ell_star => (e, cc.c),
            EllChoice::Fixed(e) => (e, e as f64 / lambda_threshold(t, e)),
        };
        let right_nodes = ((load_ratio * k as f64 * beta).ceil() as usize).max(ell);
        let mut p = Self::with_right_nodes(n, k, t, ell, right_nodes)?;
        p.beta = beta;
        p.load_ratio = load_ratio;
        Ok(p)
    }

    /// Parameters for an explicit right-node count; `beta` is reported as
    /// M / (c K).
    pub fn with_right_nodes(n: usize, k: usize, t: usize, ell: usize, right_nodes: usize) -> Result<Self, CodecError> {
        if !(1..=MAX_T).contains(&t) {
            return Err(crate::error::BchError::UnsupportedT(t).into());
        }
        if ell < 2 {
            return Err(CodecError::LeftDegree(ell));
        }
        if right_nodes < ell || right_nodes > n * ell {
            return Err(crate::error::GraphError::Shape { n, m: right_nodes, ell }.into());
        }
        let cc = c_of_t(t);
        let r_max = (n * ell).div_ceil(right_nodes);
        let field_degree = bch::degree_for(t, r_max);
        let tests_per_node = t * field_degree as usize + 1;
        Ok(DesignParams {
            n,
            k,
            t,
            ell,
            beta: right_nodes as f64 / (cc.c * k.max(1) as f64),
            c_t: cc.c,
            load_ratio: cc.c,
            right_nodes,
            r_max,
            field_degree,
            tests_per_node,
            total_tests: right_nodes * tests_per_node + 1,
        })
    }

    /// Average right degree in the pruned graph, Kℓ/M.
    pub fn lambda(&self) -> f64 {
        (self.k * self.ell) as f64 / self.right_nodes as f64
    }

    /// The asymptotic test count with this design's c(t) and ℓ.
    pub fn formula_bound(&self) -> f64 {
        crate::density::test_count_formula(self.n, self.k, self.t, self.c_t, self.ell)
    }

    /// M (t (log2(r_max + 1) + 1) + 1) + 1: the count M*s + 1 would reach
    /// if every block paid one extra bit for rounding b up.
    pub fn rounding_bound(&self) -> f64 {
        let m = self.right_nodes as f64;
        m * (self.t as f64 * ((self.r_max as f64 + 1.0).log2() + 1.0) + 1.0) + 1.0
    }

    pub fn signature(&self) -> Result<SignatureMatrix, CodecError> {
        SignatureMatrix::build(self.t, self.r_max)
    }
}

fn check_counts(n: usize, k: usize, t: usize) -> Result<(), CodecError> {
    if k < 1 || n <= k {
        return Err(CodecError::ItemCounts { n, k });
    }
    if !(1..=MAX_T).contains(&t) {
        return Err(crate::error::BchError::UnsupportedT(t).into());
    }
    Ok(())
}

/// U = [all-ones row; binary H_t], one column per slot of a right node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureMatrix {
    bch: BchSpec,
    parity: ParityColumns,
}

impl SignatureMatrix {
    pub fn build(t: usize, r_max: usize) -> Result<Self, CodecError> {
        let bch = BchSpec::for_length(t, r_max)?;
        let parity = bch::build_parity_columns(&bch);
        Ok(SignatureMatrix { bch, parity })
    }

    pub fn bch(&self) -> &BchSpec {
        &self.bch
    }

    pub fn t(&self) -> usize {
        self.bch.t()
    }

    /// Rows s = t*b + 1.
    pub fn height(&self) -> usize {
        self.bch.syndrome_bits() + 1
    }

    /// Columns r_max.
    pub fn width(&self) -> usize {
        self.parity.len()
    }

    /// Parity part of column j (without the leading 1).
    pub fn parity_column(&self, j: usize) -> &[u8] {
        self.parity.column(j)
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        std::iter::once(1)
            .chain(self.parity.column(j).iter().copied())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        std::iter::once(vec![1; self.width()])
            .chain(self.parity.rows())
            .collect()
    }
}

/// Integer test results y = Ax, slot 0 first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TestVector(pub Vec<u32>);

impl TestVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Result of the count-all test.
    pub fn total(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Observation block of right node `i`.
    pub fn block(&self, i: usize, s: usize) -> &[u32] {
        &self.0[1 + i * s..1 + (i + 1) * s]
    }

    /// One integer per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.0.len() * 3);
        for v in &self.0 {
            writeln!(out, "{v}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CodecError> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim().parse::<u32>().map_err(|e| CodecError::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(TestVector)
    }
}

/// Support file: a comment header, then one 0-based index per line.
pub fn support_to_text(support: &[usize]) -> String {
    let mut out = String::from("# defective items, 0-based indices\n");
    for v in support {
        writeln!(out, "{v}").unwrap();
    }
    out
}

pub fn support_from_text(text: &str) -> Result<Vec<usize>, CodecError> {
    let mut items = text
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .map(|(i, l)| {
            l.trim().parse::<usize>().map_err(|e| CodecError::Parse {
                line: i + 1,
                msg: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    items.sort_unstable();
    items.dedup();
    Ok(items)
}

fn check_fit(graph: &BiRegularGraph, sig: &SignatureMatrix) -> Result<(), CodecError> {
    let need = graph.max_right_degree();
    if sig.width() < need {
        return Err(CodecError::SignatureTooShort {
            have: sig.width(),
            need,
        });
    }
    Ok(())
}

/// Encodes the defective set by sparse accumulation: each defective adds
/// its signature column into the blocks of its ℓ right nodes.
pub fn encode(graph: &BiRegularGraph, sig: &SignatureMatrix, support: &[usize]) -> Result<TestVector, CodecError> {
    check_fit(graph, sig)?;
    let s = sig.height();
    let mut y = vec![0u32; 1 + graph.m() * s];
    let mut seen = HashSet::with_capacity(support.len());
    for &v in support {
        if v >= graph.n() {
            return Err(CodecError::ItemOutOfRange { index: v, n: graph.n() });
        }
        if !seen.insert(v) {
            continue;
        }
        y[0] += 1;
        for &(i, slot) in graph.left_neighbors(v) {
            let block = &mut y[1 + i as usize * s..1 + (i as usize + 1) * s];
            block[0] += 1;
            for (acc, &bit) in block[1..].iter_mut().zip(sig.parity_column(slot as usize)) {
                *acc += bit as u32;
            }
        }
    }
    Ok(TestVector(y))
}

/// Dense M*s x N measurement matrix (the count-all row is not included).
pub fn measurement_matrix(graph: &BiRegularGraph, sig: &SignatureMatrix) -> Result<Vec<Vec<u8>>, CodecError> {
    check_fit(graph, sig)?;
    let s = sig.height();
    let mut rows = vec![vec![0u8; graph.n()]; graph.m() * s];
    for i in 0..graph.m() {
        for (slot, &v) in graph.right_neighbors(i).iter().enumerate() {
            for (r, bit) in sig.column(slot).into_iter().enumerate() {
                rows[i * s + r][v as usize] = bit;
            }
        }
    }
    Ok(rows)
}

/// Row-major text dump: one row per line, entries separated by spaces.
pub fn matrix_to_text(rows: &[Vec<u8>]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolveResult {
    Unresolvable,
    /// Local slots of the defectives attached to the node.
    Resolved(Vec<usize>),
}

/// Tries to identify the defectives behind one right-node observation.
///
/// `width` is the node's degree: decoded slots at or beyond it are rejected.
/// A decode is accepted only if the decoded columns reproduce `z` exactly.
pub fn resolve_node(z: &[u32], sig: &SignatureMatrix, width: usize, method: RootMethod) -> ResolveResult {
    debug_assert_eq!(z.len(), sig.height());
    let count = z[0] as usize;
    if count > sig.t() {
        return ResolveResult::Unresolvable;
    }
    if count == 0 {
        return if z[1..].iter().all(|&v| v == 0) {
            ResolveResult::Resolved(Vec::new())
        } else {
            ResolveResult::Unresolvable
        };
    }
    let bits: Vec<u8> = z[1..].iter().map(|&v| (v & 1) as u8).collect();
    let Ok(syn) = bch::syndrome_from_bits(sig.bch(), &bits) else {
        return ResolveResult::Unresolvable;
    };
    let Ok(slots) = bch::decode_syndrome(sig.bch(), &syn, count, method) else {
        return ResolveResult::Unresolvable;
    };
    if slots.iter().any(|&j| j >= width) {
        return ResolveResult::Unresolvable;
    }
    let mut sum = vec![0u32; z.len() - 1];
    for &j in &slots {
        for (acc, &bit) in sum.iter_mut().zip(sig.parity_column(j)) {
            *acc += bit as u32;
        }
    }
    if sum != z[1..] {
        return ResolveResult::Unresolvable;
    }
    ResolveResult::Resolved(slots)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecoderOptions {
    pub root_method: RootMethod,
    /// Shuffle each round's work list with this seed. The outcome must not
    /// depend on it.
    pub shuffle_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Recovered items, 0-based, ascending.
    pub recovered: Vec<usize>,
    /// Peeling rounds executed.
    pub iterations: usize,
    /// Right nodes never resolved.
    pub unresolved_right: usize,
    /// All declared defectives found and every residual is zero.
    pub success: bool,
}

/// Round-based peeling state. [`decode`] drives it to completion; tests can
/// step it and inspect residuals between rounds.
#[derive(Debug)]
pub struct Peeler<'a> {
    graph: &'a BiRegularGraph,
    sig: &'a SignatureMatrix,
    options: DecoderOptions,
    declared: u32,
    residual: Vec<u32>,
    resolved: Vec<bool>,
    recovered: HashSet<u32>,
    frontier: Vec<usize>,
    rounds: usize,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Peeler<'a> {
    pub fn new(
        graph: &'a BiRegularGraph,
        sig: &'a SignatureMatrix,
        y: &TestVector,
        options: DecoderOptions,
    ) -> Result<Self, CodecError> {
        check_fit(graph, sig)?;
        let s = sig.height();
        let expected = 1 + graph.m() * s;
        if y.len() != expected {
            return Err(CodecError::TestVectorLength { expected, got: y.len() });
        }
        let residual = y.0[1..].to_vec();
        let t = sig.t() as u32;
        let frontier = (0..graph.m()).filter(|&i| residual[i * s] <= t).collect();
        Ok(Peeler {
            graph,
            sig,
            options,
            declared: y.total(),
            residual,
            resolved: vec![false; graph.m()],
            recovered: HashSet::with_capacity(y.total() as usize),
            frontier,
            rounds: 0,
            rng: options.shuffle_seed.map(ChaCha8Rng::seed_from_u64),
        })
    }

    pub fn residual(&self, i: usize) -> &[u32] {
        let s = self.sig.height();
        &self.residual[i * s..(i + 1) * s]
    }

    pub fn recovered(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.recovered.iter().map(|&x| x as usize).collect();
        v.sort_unstable();
        v
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn is_done(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Runs one round over every node queued by the previous one. Returns
    /// false once nothing is left to try.
    pub fn round(&mut self) -> Result<bool, CodecError> {
        let mut work = std::mem::take(&mut self.frontier);
        // Nodes can be queued and then resolved later in the same round.
        work.retain(|&i| !self.resolved[i]);
        if work.is_empty() {
            return Ok(false);
        }
        self.rounds += 1;
        if let Some(rng) = self.rng.as_mut() {
            work.shuffle(rng);
        }
        let s = self.sig.height();
        let t = self.sig.t() as u32;
        let mut queued = HashSet::new();
        for i in work {
            if self.resolved[i] {
                continue;
            }
            let result = resolve_node(
                self.residual(i),
                self.sig,
                self.graph.right_degree(i),
                self.options.root_method,
            );
            let ResolveResult::Resolved(slots) = result else {
                continue;
            };
            self.resolved[i] = true;
            for slot in slots {
                let v = self.graph.right_neighbors(i)[slot];
                if !self.recovered.insert(v) {
                    continue;
                }
                for &(j, jslot) in self.graph.left_neighbors(v as usize) {
                    let j = j as usize;
                    let block = &mut self.residual[j * s..(j + 1) * s];
                    let column = std::iter::once(&1u8).chain(self.sig.parity_column(jslot as usize));
                    for (acc, &bit) in block.iter_mut().zip(column) {
                        *acc = acc
                            .checked_sub(bit as u32)
                            .ok_or(CodecError::Inconsistent { node: j })?;
                    }
                    if !self.resolved[j] && block[0] <= t && queued.insert(j) {
                        self.frontier.push(j);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn finish(mut self) -> Result<DecodeOutcome, CodecError> {
        while self.round()? {}
        let recovered = self.recovered();
        let success = recovered.len() == self.declared as usize && self.residual.iter().all(|&v| v == 0);
        Ok(DecodeOutcome {
            recovered,
            iterations: self.rounds,
            unresolved_right: self.resolved.iter().filter(|r| !**r).count(),
            success,
        })
    }
}

pub fn decode(graph: &BiRegularGraph, sig: &SignatureMatrix, y: &TestVector) -> Result<DecodeOutcome, CodecError> {
    decode_with(graph, sig, y, DecoderOptions::default())
}

pub fn decode_with(
    graph: &BiRegularGraph,
    sig: &SignatureMatrix,
    y: &TestVector,
    options: DecoderOptions,
) -> Result<DecodeOutcome, CodecError> {
    Peeler::new(graph, sig, y, options)?.finish()
}
