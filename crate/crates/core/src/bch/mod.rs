//! Binary t-error-correcting BCH codes, used here only through their
//! parity-check matrices.
//!
//! Column j of the binary parity-check matrix is the stack, for k = 1..=t, of
//! the b-bit columns of α^((2k-1) j). A set of at most t columns is recovered
//! from its mod-2 sum (the syndrome) by Berlekamp-Massey followed by root
//! finding; position j corresponds to the locator root α^(-j).

mod locator;
mod poly;
mod roots;

pub use locator::berlekamp_massey;
pub use poly::Polynomial;
pub use roots::{find_roots, solve_affine, solve_artin_schreier, solve_quadratic, RootMethod, DIRECT_MAX_DEGREE};

use crate::error::{BchError, DecodeFailure};
use crate::field::{FieldElement, FieldSpec, MIN_DEGREE};

/// Largest supported correction capability.
pub const MAX_T: usize = 8;

/// Parameters of a (possibly shortened) binary BCH code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BchSpec {
    field: FieldSpec,
    t: usize,
    r: usize,
}

impl BchSpec {
    /// Code over GF(2^degree) correcting `t` errors, shortened to its first
    /// `length` positions.
    pub fn new(degree: u32, t: usize, length: usize) -> Result<Self, BchError> {
        if !(1..=MAX_T).contains(&t) {
            return Err(BchError::UnsupportedT(t));
        }
        let field = FieldSpec::new(degree)?;
        if t >= 1 << (degree - 1) {
            return Err(BchError::CapabilityTooLarge { t, degree });
        }
        let n = field.order() as usize;
        if length == 0 || length > n {
            return Err(BchError::Length { length, max: n });
        }
        Ok(BchSpec { field, t, r: length })
    }

    /// Smallest admissible code of at least `length` positions:
    /// b = max(3, ceil(log2(length + 1))), raised until t < 2^(b-1).
    pub fn for_length(t: usize, length: usize) -> Result<Self, BchError> {
        BchSpec::new(degree_for(t, length), t, length)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Full code length 2^b - 1.
    pub fn n(&self) -> usize {
        self.field.order() as usize
    }

    /// Used (shortened) length.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Rows of the binary parity-check matrix: t * b.
    pub fn syndrome_bits(&self) -> usize {
        self.t * self.field.degree() as usize
    }

    /// Field element of block k (0-based, exponent 2k+1) in column j.
    fn entry(&self, k: usize, j: usize) -> FieldElement {
        self.field.alpha_pow(((2 * k + 1) * j) as i64)
    }
}

/// Field degree [`BchSpec::for_length`] picks for a given length.
pub fn degree_for(t: usize, length: usize) -> u32 {
    let mut b = MIN_DEGREE;
    while (1usize << b) - 1 < length || t >= 1 << (b - 1) {
        b += 1;
    }
    b
}

/// The binary parity-check matrix, column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityColumns {
    columns: Vec<Vec<u8>>,
}

impl ParityColumns {
    pub fn columns(&self) -> &[Vec<u8>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.columns[j]
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Number of rows, t * b.
    pub fn height(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Row-major view, mostly for printing.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.height())
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect()
    }
}

pub fn build_parity_columns(spec: &BchSpec) -> ParityColumns {
    let columns = (0..spec.r)
        .map(|j| {
            (0..spec.t)
                .flat_map(|k| spec.field.element_to_bit_column(spec.entry(k, j)))
                .collect()
        })
        .collect();
    ParityColumns { columns }
}

/// Odd power sums S_1, S_3, ..., S_(2t-1) of an error pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome(pub Vec<FieldElement>);

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| s.is_zero())
    }

    /// S_1, S_2, ..., S_2t, with the even terms filled in as S_2k = S_k^2.
    pub fn expand(&self, field: &FieldSpec) -> Vec<FieldElement> {
        let t = self.0.len();
        let mut full = vec![FieldElement::ZERO; 2 * t + 1];
        for i in 1..=2 * t {
            full[i] = if i % 2 == 1 {
                self.0[i / 2]
            } else {
                field.square(full[i / 2])
            };
        }
        full.remove(0);
        full
    }

    /// Packs back into the MSB-first bit layout of [`build_parity_columns`].
    pub fn to_bits(&self, spec: &BchSpec) -> Vec<u8> {
        self.0
            .iter()
            .flat_map(|&s| spec.field.element_to_bit_column(s))
            .collect()
    }
}

/// Unpacks a t*b bit vector (entries read mod 2) into odd syndromes.
pub fn syndrome_from_bits(spec: &BchSpec, bits: &[u8]) -> Result<Syndrome, BchError> {
    if bits.len() != spec.syndrome_bits() {
        return Err(BchError::SyndromeLength {
            expected: spec.syndrome_bits(),
            got: bits.len(),
        });
    }
    let b = spec.field.degree() as usize;
    let elems = bits
        .chunks(b)
        .map(|chunk| spec.field.bit_column_to_element(chunk))
        .collect::<Result<_, _>>()?;
    Ok(Syndrome(elems))
}

/// Syndrome of the error pattern supported on `positions`, computed
/// directly from the power sums.
pub fn syndrome_of_positions(spec: &BchSpec, positions: &[usize]) -> Syndrome {
    Syndrome(
        (0..spec.t)
            .map(|k| {
                positions
                    .iter()
                    .fold(FieldElement::ZERO, |acc, &j| spec.field.add(acc, spec.entry(k, j)))
            })
            .collect(),
    )
}

/// Error locator Λ(x) = Π (1 + α^(p_i) x) for the pattern behind `syn`.
pub fn find_error_locator(field: &FieldSpec, syn: &Syndrome) -> Polynomial {
    berlekamp_massey(field, &syn.expand(field))
}

/// Recovers the positions of a weight-`weight` error pattern from its
/// syndrome. Sorted ascending.
///
/// Any inconsistency (locator degree, root count, roots in the shortened
/// region) is reported as a [`DecodeFailure`]. `RootMethod::Direct` falls
/// back to Chien search for locators above degree 4.
pub fn decode_syndrome(
    spec: &BchSpec,
    syn: &Syndrome,
    weight: usize,
    method: RootMethod,
) -> Result<Vec<usize>, DecodeFailure> {
    if weight > spec.t {
        return Err(DecodeFailure::WeightTooLarge { weight, t: spec.t });
    }
    let field = &spec.field;
    let locator = find_error_locator(field, syn);
    let degree = locator.degree();
    if degree != weight {
        return Err(DecodeFailure::DegreeMismatch { degree, weight });
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let method = if degree > DIRECT_MAX_DEGREE {
        RootMethod::Chien
    } else {
        method
    };
    let roots = find_roots(field, &locator, method).expect("degree checked for direct method");
    if roots.len() != degree {
        return Err(DecodeFailure::RootCount {
            roots: roots.len(),
            degree,
        });
    }
    let order = field.order();
    let mut positions = Vec::with_capacity(degree);
    for root in roots {
        let log = field
            .discrete_log(root)
            .map_err(|_| DecodeFailure::RootCount { roots: 0, degree })?;
        let position = ((order - log) % order) as usize;
        if position >= spec.r {
            return Err(DecodeFailure::OutsideShortened {
                position,
                length: spec.r,
            });
        }
        positions.push(position);
    }
    positions.sort_unstable();
    Ok(positions)
}
