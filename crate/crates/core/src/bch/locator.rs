use crate::bch::poly::Polynomial;
use crate::field::{FieldElement, FieldSpec};

/// Berlekamp-Massey: shortest LFSR connection polynomial generating
/// `syndromes` (S_1, S_2, ..., S_2t). The result has constant term 1.
pub fn berlekamp_massey(field: &FieldSpec, syndromes: &[FieldElement]) -> Polynomial {
    let mut current = vec![FieldElement::ONE];
    let mut previous = vec![FieldElement::ONE];
    let mut length = 0usize;
    let mut shift = 1usize;
    let mut last_discrepancy = FieldElement::ONE;

    for n in 0..syndromes.len() {
        let mut d = syndromes[n];
        for i in 1..=length.min(current.len() - 1) {
            d = field.add(d, field.mul(current[i], syndromes[n - i]));
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let factor = field.div(d, last_discrepancy).expect("discrepancy is nonzero");
        let mut next = current.clone();
        if next.len() < previous.len() + shift {
            next.resize(previous.len() + shift, FieldElement::ZERO);
        }
        for (i, &p) in previous.iter().enumerate() {
            next[i + shift] = field.add(next[i + shift], field.mul(factor, p));
        }
        if 2 * length <= n {
            length = n + 1 - length;
            previous = current;
            last_discrepancy = d;
            shift = 1;
        } else {
            shift += 1;
        }
        current = next;
    }
    Polynomial::new(current)
}
