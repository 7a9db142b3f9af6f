use crate::field::{FieldElement, FieldSpec};

/// Polynomial over GF(2^b), coefficients stored lowest degree first.
///
/// Always trimmed: the last stored coefficient is nonzero, and the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![FieldElement::ONE],
        }
    }

    /// Monic product of (x - r) over `roots`.
    pub fn from_roots(field: &FieldSpec, roots: &[FieldElement]) -> Self {
        let mut coeffs = vec![FieldElement::ONE];
        for &r in roots {
            let mut next = vec![FieldElement::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = field.add(next[i + 1], c);
                next[i] = field.add(next[i], field.mul(c, r));
            }
            coeffs = next;
        }
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn scale(&self, field: &FieldSpec, k: FieldElement) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&c| field.mul(c, k)).collect())
    }

    /// Coefficients of p(y + c), by repeated synthetic division.
    pub fn taylor_shift(&self, field: &FieldSpec, c: FieldElement) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                a[j] = field.add(a[j], field.mul(c, a[j + 1]));
            }
        }
        Polynomial::new(a)
    }
}
