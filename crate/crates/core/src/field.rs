//! Arithmetic in GF(2^b) for 3 <= b <= 16.
//!
//! Elements are stored in polynomial basis: bit `i` of the value is the
//! coefficient of α^i, where α is a root of the degree-b primitive polynomial
//! listed in [`PRIMITIVE_POLYS`]. Multiplication goes through log/antilog
//! tables built once per field.

use std::fmt;

use crate::error::FieldError;

/// Smallest supported extension degree.
pub const MIN_DEGREE: u32 = 3;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Canonical primitive polynomial per degree, indexed by `degree - MIN_DEGREE`.
/// Bit `i` holds the coefficient of x^i.
pub const PRIMITIVE_POLYS: [u32; 14] = [
    0b1011,              // 3: x^3 + x + 1
    0b1_0011,            // 4: x^4 + x + 1
    0b10_0101,           // 5: x^5 + x^2 + 1
    0b100_0011,          // 6: x^6 + x + 1
    0b1000_1001,         // 7: x^7 + x^3 + 1
    0b1_0001_1101,       // 8: x^8 + x^4 + x^3 + x^2 + 1
    0b10_0001_0001,      // 9: x^9 + x^4 + 1
    0b100_0000_1001,     // 10: x^10 + x^3 + 1
    0b1000_0000_0101,    // 11: x^11 + x^2 + 1
    0b1_0000_0101_0011,  // 12: x^12 + x^6 + x^4 + x + 1
    0b10_0000_0001_1011, // 13: x^13 + x^4 + x^3 + x + 1
    0x4443,              // 14: x^14 + x^10 + x^6 + x + 1
    0x8003,              // 15: x^15 + x + 1
    0x1100B,             // 16: x^16 + x^12 + x^3 + x + 1
];

/// An element of GF(2^b), as its polynomial-basis bit pattern.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

/// A binary extension field GF(2^b) together with its log/antilog tables.
///
/// Immutable after construction; share it by reference or `Arc`.
#[derive(Clone)]
pub struct FieldSpec {
    degree: u32,
    primitive_poly: u32,
    order: u32,
    /// `exp[i] = α^i` for `i` in `0..2*order`, doubled so products need no
    /// modular reduction of the exponent sum.
    exp: Vec<u16>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("degree", &self.degree)
            .field("primitive_poly", &format_args!("{:#b}", self.primitive_poly))
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.primitive_poly == other.primitive_poly
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds GF(2^degree) with the canonical primitive polynomial.
    pub fn new(degree: u32) -> Result<Self, FieldError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::DegreeOutOfRange(degree));
        }
        let primitive_poly = PRIMITIVE_POLYS[(degree - MIN_DEGREE) as usize];
        let order = (1u32 << degree) - 1;

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; order as usize + 1];
        let mut x: u32 = 1;
        for i in 0..order {
            exp[i as usize] = x as u16;
            exp[(i + order) as usize] = x as u16;
            log[x as usize] = i;
            x <<= 1;
            if x & (1 << degree) != 0 {
                x ^= primitive_poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial {primitive_poly:#x} is not primitive");

        Ok(FieldSpec {
            degree,
            primitive_poly,
            order,
            exp,
            log,
        })
    }

    /// Extension degree b.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Primitive polynomial bitmask (bit i = coefficient of x^i).
    #[inline]
    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Size of the multiplicative group, 2^b - 1.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Number of field elements, 2^b.
    #[inline]
    pub fn size(&self) -> u32 {
        self.order + 1
    }

    /// The primitive element α.
    #[inline]
    pub fn alpha(&self) -> FieldElement {
        FieldElement(2)
    }

    /// Wraps a raw value, rejecting bit patterns outside the field.
    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value > self.order {
            return Err(FieldError::ElementOutOfRange {
                value,
                degree: self.degree,
            });
        }
        Ok(FieldElement(value as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, c: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ c.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, c: FieldElement) -> FieldElement {
        if a.is_zero() || c.is_zero() {
            return FieldElement::ZERO;
        }
        let e = self.log[a.0 as usize] + self.log[c.0 as usize];
        FieldElement(self.exp[e as usize])
    }

    /// α^k, for any integer exponent (reduced modulo the group order).
    #[inline]
    pub fn alpha_pow(&self, k: i64) -> FieldElement {
        let e = k.rem_euclid(self.order as i64) as usize;
        FieldElement(self.exp[e])
    }

    /// a^k. `0^0` is 1.
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let e = (self.log[a.0 as usize] as u64 * (k % self.order as u64)) % self.order as u64;
        FieldElement(self.exp[e as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let e = (self.order - self.log[a.0 as usize]) % self.order;
        Ok(FieldElement(self.exp[e as usize]))
    }

    pub fn div(&self, a: FieldElement, c: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(c)?))
    }

    /// The exponent k in [0, order) with α^k = a.
    pub fn discrete_log(&self, a: FieldElement) -> Result<u32, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroLog);
        }
        Ok(self.log[a.0 as usize])
    }

    /// Square root; every element of a binary field has exactly one.
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        if a.is_zero() {
            return a;
        }
        let l = self.log[a.0 as usize];
        // l/2 mod order, order being odd
        let e = if l.is_multiple_of(2) {
            l / 2
        } else {
            (l + self.order) / 2
        };
        FieldElement(self.exp[e as usize])
    }

    /// Absolute trace Tr(a) = a + a^2 + ... + a^(2^(b-1)), which lies in GF(2).
    pub fn trace(&self, a: FieldElement) -> u8 {
        let mut acc = a;
        let mut x = a;
        for _ in 1..self.degree {
            x = self.square(x);
            acc = self.add(acc, x);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// Binary column for `a`, most significant coefficient first: entry j is
    /// the coefficient of α^(b-1-j).
    pub fn element_to_bit_column(&self, a: FieldElement) -> Vec<u8> {
        (0..self.degree).rev().map(|i| ((a.0 >> i) & 1) as u8).collect()
    }

    /// Inverse of [`element_to_bit_column`](Self::element_to_bit_column).
    /// Each entry is read modulo 2.
    pub fn bit_column_to_element(&self, bits: &[u8]) -> Result<FieldElement, FieldError> {
        if bits.len() != self.degree as usize {
            return Err(FieldError::BitLength {
                expected: self.degree as usize,
                got: bits.len(),
            });
        }
        let v = bits.iter().fold(0u16, |acc, &bit| (acc << 1) | (bit & 1) as u16);
        Ok(FieldElement(v))
    }
}
