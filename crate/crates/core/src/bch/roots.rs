//! Root finding for error locator polynomials.
//!
//! Two interchangeable methods:
//!
//! * [`RootMethod::Chien`] evaluates the polynomial at every field element.
//!   It costs O(d * 2^b) and is the reference.
//! * [`RootMethod::Direct`] handles degree <= 4 in closed form. Linear and
//!   quadratic equations are solved through the trace / half-trace; cubics
//!   and quartics are reduced to affine polynomials
//!   `L(z) = z^4 + a z^2 + c z = k`, whose left side is GF(2)-linear, and
//!   solved as a b x b binary linear system. Cost is polynomial in b only.

use crate::bch::poly::Polynomial;
use crate::error::BchError;
use crate::field::{FieldElement, FieldSpec};

/// Highest degree the direct solver handles.
pub const DIRECT_MAX_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RootMethod {
    #[default]
    Chien,
    Direct,
}

impl std::str::FromStr for RootMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chien" => Ok(RootMethod::Chien),
            "direct" => Ok(RootMethod::Direct),
            other => Err(format!("unknown root method {other:?} (chien|direct)")),
        }
    }
}

/// All distinct roots of `poly` in the field, sorted by value.
///
/// The zero polynomial has no well-defined root set; it returns empty.
pub fn find_roots(field: &FieldSpec, poly: &Polynomial, method: RootMethod) -> Result<Vec<FieldElement>, BchError> {
    let mut roots = match method {
        RootMethod::Chien => chien_search(field, poly),
        RootMethod::Direct => direct_roots(field, poly)?,
    };
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

fn chien_search(field: &FieldSpec, poly: &Polynomial) -> Vec<FieldElement> {
    if poly.is_zero() || poly.degree() == 0 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if poly.coeff(0).is_zero() {
        roots.push(FieldElement::ZERO);
    }
    // terms[k] holds coeff_k * α^(i*k) at step i.
    let mut terms = poly.coeffs().to_vec();
    let steps: Vec<FieldElement> = (0..terms.len()).map(|k| field.alpha_pow(k as i64)).collect();
    for i in 0..field.order() {
        let sum = terms.iter().fold(FieldElement::ZERO, |acc, &t| field.add(acc, t));
        if sum.is_zero() {
            roots.push(field.alpha_pow(i as i64));
        }
        for (t, &s) in terms.iter_mut().zip(&steps) {
            *t = field.mul(*t, s);
        }
    }
    roots
}

fn direct_roots(field: &FieldSpec, poly: &Polynomial) -> Result<Vec<FieldElement>, BchError> {
    let d = poly.degree();
    if d > DIRECT_MAX_DEGREE {
        return Err(BchError::DirectDegree(d));
    }
    if poly.is_zero() || d == 0 {
        return Ok(Vec::new());
    }
    let lead_inv = field.inv(poly.coeff(d))?;
    let monic = poly.scale(field, lead_inv);
    let c = |i| monic.coeff(i);
    let roots = match d {
        1 => vec![c(0)],
        2 => solve_quadratic(field, FieldElement::ONE, c(1), c(0)),
        3 => solve_cubic(field, &monic),
        _ => solve_quartic(field, &monic),
    };
    Ok(roots)
}

/// Roots of a*x^2 + b*x + c with a != 0.
pub fn solve_quadratic(field: &FieldSpec, a: FieldElement, b: FieldElement, c: FieldElement) -> Vec<FieldElement> {
    let a_inv = field.inv(a).expect("leading coefficient is nonzero");
    let (b, c) = (field.mul(b, a_inv), field.mul(c, a_inv));
    if b.is_zero() {
        // x^2 = c has the single (double) root sqrt(c).
        return vec![field.sqrt(c)];
    }
    // x = b*y turns x^2 + b x + c into y^2 + y + c/b^2.
    let k = field.mul(c, field.inv(field.square(b)).unwrap());
    match solve_artin_schreier(field, k) {
        Some(y) => vec![field.mul(b, y), field.mul(b, field.add(y, FieldElement::ONE))],
        None => Vec::new(),
    }
}

/// One solution y of y^2 + y = k, if any (there is one iff Tr(k) = 0; the
/// other is y + 1).
pub fn solve_artin_schreier(field: &FieldSpec, k: FieldElement) -> Option<FieldElement> {
    if field.trace(k) != 0 {
        return None;
    }
    if field.degree() % 2 == 1 {
        // Half-trace: sum of k^(4^i) for i in 0..=(b-1)/2.
        let mut acc = k;
        let mut x = k;
        for _ in 0..(field.degree() - 1) / 2 {
            x = field.square(field.square(x));
            acc = field.add(acc, x);
        }
        Some(acc)
    } else {
        solve_affine(field, &[FieldElement::ONE, FieldElement::ONE], k)
            .into_iter()
            .next()
    }
}

fn solve_cubic(field: &FieldSpec, monic: &Polynomial) -> Vec<FieldElement> {
    // Depress: x = y + a2 removes the y^2 term, leaving y^3 + p y + q.
    let a2 = monic.coeff(2);
    let depressed = monic.taylor_shift(field, a2);
    let (p, q) = (depressed.coeff(1), depressed.coeff(0));
    // y*(y^3 + p y + q) = y^4 + p y^2 + q y is linearized; its kernel holds
    // every nonzero root of the cubic.
    let mut ys: Vec<FieldElement> = kernel(field, &[q, p, FieldElement::ONE])
        .into_iter()
        .filter(|y| !y.is_zero())
        .collect();
    if q.is_zero() {
        ys.push(FieldElement::ZERO);
    }
    ys.into_iter().map(|y| field.add(y, a2)).collect()
}

fn solve_quartic(field: &FieldSpec, monic: &Polynomial) -> Vec<FieldElement> {
    let a3 = monic.coeff(3);
    if a3.is_zero() {
        // x^4 + a2 x^2 + a1 x = a0 is already affine.
        return solve_affine(
            field,
            &[monic.coeff(1), monic.coeff(2), FieldElement::ONE],
            monic.coeff(0),
        );
    }
    // Shift by c = sqrt(a1/a3) to kill the linear term:
    // y^4 + a3 y^3 + e2 y^2 + e0.
    let shift = field.sqrt(field.mul(monic.coeff(1), field.inv(a3).unwrap()));
    let shifted = monic.taylor_shift(field, shift);
    debug_assert!(shifted.coeff(1).is_zero());
    let (e2, e0) = (shifted.coeff(2), shifted.coeff(0));
    let ys = if e0.is_zero() {
        // y^2 (y^2 + a3 y + e2)
        let mut ys = solve_quadratic(field, FieldElement::ONE, a3, e2);
        ys.push(FieldElement::ZERO);
        ys
    } else {
        // y = 1/z: e0 z^4 + e2 z^2 + a3 z + 1 = 0.
        let e0_inv = field.inv(e0).unwrap();
        solve_affine(
            field,
            &[field.mul(a3, e0_inv), field.mul(e2, e0_inv), FieldElement::ONE],
            e0_inv,
        )
        .into_iter()
        .map(|z| field.inv(z).expect("z = 0 cannot satisfy L(z) = 1/e0"))
        .collect()
    };
    ys.into_iter().map(|y| field.add(y, shift)).collect()
}

/// Evaluates the linearized polynomial sum_i coeffs[i] * z^(2^i).
fn linearized(field: &FieldSpec, coeffs: &[FieldElement], z: FieldElement) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    let mut power = z;
    for &c in coeffs {
        acc = field.add(acc, field.mul(c, power));
        power = field.square(power);
    }
    acc
}

/// All z with L(z) = 0.
fn kernel(field: &FieldSpec, coeffs: &[FieldElement]) -> Vec<FieldElement> {
    solve_affine(field, coeffs, FieldElement::ZERO)
}

/// All solutions z of L(z) = rhs, where L is the linearized polynomial with
/// the given coefficients. Solved as a binary linear system in the
/// polynomial basis.
pub fn solve_affine(field: &FieldSpec, coeffs: &[FieldElement], rhs: FieldElement) -> Vec<FieldElement> {
    let b = field.degree() as usize;
    // images[j] = L(α^j) as a bit pattern; these are the matrix columns.
    let images: Vec<u32> = (0..b)
        .map(|j| linearized(field, coeffs, FieldElement(1 << j)).value() as u32)
        .collect();

    // Row r: bit j set if images[j] has bit r; bit b carries the rhs.
    let mut rows: Vec<u32> = (0..b)
        .map(|r| {
            let mut row = 0u32;
            for (j, &img) in images.iter().enumerate() {
                row |= ((img >> r) & 1) << j;
            }
            row | (((rhs.value() as u32 >> r) & 1) << b)
        })
        .collect();

    let mut pivot_cols = Vec::with_capacity(b);
    let mut rank = 0;
    for col in 0..b {
        let Some(p) = (rank..b).find(|&i| (rows[i] >> col) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && (*row >> col) & 1 == 1 {
                *row ^= pivot;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    // Inconsistent: a zero row with rhs bit set.
    if rows[rank..].iter().any(|&row| row >> b & 1 == 1) {
        return Vec::new();
    }

    let mut particular = 0u32;
    for (i, &col) in pivot_cols.iter().enumerate() {
        particular |= ((rows[i] >> b) & 1) << col;
    }
    let free: Vec<usize> = (0..b).filter(|c| !pivot_cols.contains(c)).collect();
    let basis: Vec<u32> = free
        .iter()
        .map(|&f| {
            let mut v = 1u32 << f;
            for (i, &col) in pivot_cols.iter().enumerate() {
                v |= ((rows[i] >> f) & 1) << col;
            }
            v
        })
        .collect();

    (0u32..1 << basis.len())
        .map(|mask| {
            let v = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .fold(particular, |acc, (_, &bv)| acc ^ bv);
            FieldElement(v as u16)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_roots(field: &FieldSpec, p: &Polynomial) -> Vec<FieldElement> {
        (0..field.size())
            .map(|v| FieldElement(v as u16))
            .filter(|&x| p.eval(field, x).is_zero())
            .collect()
    }

    #[test]
    fn linear_locator() {
        let f = FieldSpec::new(6).unwrap();
        for p in 0..63 {
            let loc = Polynomial::new(vec![FieldElement::ONE, f.alpha_pow(p)]);
            for m in [RootMethod::Chien, RootMethod::Direct] {
                assert_eq!(find_roots(&f, &loc, m).unwrap(), vec![f.alpha_pow(-p)]);
            }
        }
    }

    #[test]
    fn artin_schreier_all_fields() {
        for b in 3..=12 {
            let f = FieldSpec::new(b).unwrap();
            for v in 0..f.size() {
                let k = FieldElement(v as u16);
                match solve_artin_schreier(&f, k) {
                    Some(y) => assert_eq!(f.add(f.square(y), y), k),
                    None => assert_eq!(f.trace(k), 1),
                }
            }
        }
    }

    #[test]
    fn irreducible_quadratic_has_no_roots() {
        for b in [3, 4, 8, 9] {
            let f = FieldSpec::new(b).unwrap();
            // x^2 + x + k with Tr(k) = 1 is irreducible.
            let k = (1..f.size())
                .map(|v| FieldElement(v as u16))
                .find(|&k| f.trace(k) == 1)
                .unwrap();
            let p = Polynomial::new(vec![k, FieldElement::ONE, FieldElement::ONE]);
            assert!(find_roots(&f, &p, RootMethod::Chien).unwrap().is_empty());
            assert!(find_roots(&f, &p, RootMethod::Direct).unwrap().is_empty());
        }
    }

    #[test]
    fn direct_rejects_degree_five() {
        let f = FieldSpec::new(8).unwrap();
        let p = Polynomial::new(vec![FieldElement::ONE; 6]);
        assert_eq!(find_roots(&f, &p, RootMethod::Direct), Err(BchError::DirectDegree(5)));
    }

    #[test]
    fn random_quadratics_agree_gf256() {
        let f = FieldSpec::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let coeffs = vec![
                FieldElement(rng.random_range(0..256)),
                FieldElement(rng.random_range(0..256)),
                FieldElement(rng.random_range(1..256)),
            ];
            let p = Polynomial::new(coeffs);
            assert_eq!(
                find_roots(&f, &p, RootMethod::Direct).unwrap(),
                find_roots(&f, &p, RootMethod::Chien).unwrap(),
                "{p:?}"
            );
        }
    }

    #[test]
    fn random_polynomials_up_to_quartic_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for b in [3, 4, 5, 6, 7, 8, 10] {
            let f = FieldSpec::new(b).unwrap();
            for _ in 0..2_000 {
                let d = rng.random_range(1..=4);
                let mut coeffs: Vec<FieldElement> = (0..d)
                    .map(|_| FieldElement(rng.random_range(0..f.size()) as u16))
                    .collect();
                coeffs.push(FieldElement(rng.random_range(1..f.size()) as u16));
                let p = Polynomial::new(coeffs);
                let expected = brute_roots(&f, &p);
                assert_eq!(find_roots(&f, &p, RootMethod::Chien).unwrap(), expected);
                assert_eq!(find_roots(&f, &p, RootMethod::Direct).unwrap(), expected, "{p:?}");
            }
        }
    }

    #[test]
    fn split_quartics_with_distinct_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for b in [4, 6, 9, 12] {
            let f = FieldSpec::new(b).unwrap();
            for _ in 0..500 {
                let mut roots: Vec<FieldElement> = Vec::new();
                while roots.len() < 4 {
                    let r = FieldElement(rng.random_range(0..f.size()) as u16);
                    if !roots.contains(&r) {
                        roots.push(r);
                    }
                }
                let p = Polynomial::from_roots(&f, &roots);
                roots.sort_unstable();
                assert_eq!(find_roots(&f, &p, RootMethod::Direct).unwrap(), roots);
            }
        }
    }
}
