//! Sparse multivectors of the complex Clifford algebra with signature (0, m).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{FieldElement, Rational};

/// Bit `α - 1` set means `e_α` is present.
pub type Blade = u32;

pub const MAX_DIM: usize = 32;

/// Sign of `e_a e_b` reduced to the canonical blade `a xor b`, with `e_α² = -1`.
pub fn blade_sign(a: Blade, b: Blade) -> i32 {
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn blade_from_indices(indices: &[usize]) -> Result<(Blade, i32)> {
    // Any order is accepted; the sign records the sorting permutation.
    let mut mask: Blade = 0;
    let mut sign = 1;
    for &idx in indices {
        if idx == 0 || idx > MAX_DIM {
            return Err(Error::IndexOutOfRange(format!("e_{idx}")));
        }
        let bit = 1 << (idx - 1);
        sign *= blade_sign(mask, bit);
        mask ^= bit;
    }
    Ok((mask, sign))
}

pub fn blade_indices(mask: Blade) -> Vec<usize> {
    (0..MAX_DIM).filter(|k| mask & (1 << k) != 0).map(|k| k + 1).collect()
}

pub fn blade_grade(mask: Blade) -> usize {
    mask.count_ones() as usize
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Multivector {
    dim: usize,
    terms: BTreeMap<Blade, FieldElement>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "algebra dimension {dim} too large");
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: FieldElement) -> Self {
        let mut m = Self::zero(dim);
        m.add_term(0, c);
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, FieldElement::one())
    }

    /// `e_α`, 1-based.
    pub fn basis_vector(dim: usize, alpha: usize) -> Result<Self> {
        Self::blade(dim, &[alpha], FieldElement::one())
    }

    /// `c e_{i1} e_{i2} ...` for indices in any order.
    pub fn blade(dim: usize, indices: &[usize], c: FieldElement) -> Result<Self> {
        let (mask, sign) = blade_from_indices(indices)?;
        if indices.iter().any(|&i| i > dim) {
            return Err(Error::IndexOutOfRange(format!("blade {indices:?} in dimension {dim}")));
        }
        let c = if sign < 0 { -c } else { c };
        Ok(Self::scalar(dim, FieldElement::zero()).with_term(mask, c))
    }

    fn with_term(mut self, mask: Blade, c: FieldElement) -> Self {
        self.add_term(mask, c);
        self
    }

    /// Vector `Σ x_α e_α`.
    pub fn vector(dim: usize, coords: &[FieldElement]) -> Result<Self> {
        if coords.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: coords.len() });
        }
        let mut m = Self::zero(dim);
        for (k, c) in coords.iter().enumerate() {
            m.add_term(1 << k, c.clone());
        }
        Ok(m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Blade, FieldElement)>>(dim: usize, terms: I) -> Result<Self> {
        let mut m = Self::zero(dim);
        for (mask, c) in terms {
            if dim < MAX_DIM && mask >> dim != 0 {
                return Err(Error::IndexOutOfRange(format!("blade {:?} in dimension {dim}", blade_indices(mask))));
            }
            m.add_term(mask, c);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &FieldElement)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: Blade) -> FieldElement {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> FieldElement {
        self.coeff(0)
    }

    pub fn add_term(&mut self, mask: Blade, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc: BTreeMap<Blade, FieldElement> = BTreeMap::new();
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &other.terms {
                let c = ca * cb;
                let slot = acc.entry(ma ^ mb).or_default();
                if blade_sign(ma, mb) > 0 {
                    *slot += &c;
                } else {
                    *slot -= &c;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Multivector { dim: self.dim, terms: acc })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(m, x)| (*m, x * c)).collect();
        Multivector { dim: self.dim, terms }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&FieldElement::from_rational(r.clone()))
    }

    /// `[x]_k`.
    pub fn grade(&self, k: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| blade_grade(**m) == k).map(|(m, c)| (*m, c.clone())).collect();
        Multivector { dim: self.dim, terms }
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|m| blade_grade(*m) == k)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| blade_grade(*m) % 2 == 0)
    }

    fn conj_sign(mask: Blade) -> bool {
        let k = blade_grade(mask);
        (k * (k + 1) / 2) % 2 == 1
    }

    /// Main anti-involution with `ē_α = -e_α`.
    pub fn clifford_conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, if Self::conj_sign(*m) { -c } else { c.clone() }))
            .collect();
        Multivector { dim: self.dim, terms }
    }

    /// Clifford conjugation on blades, complex conjugation on coefficients.
    pub fn hermitian_conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let cc = c.conj();
                (*m, if Self::conj_sign(*m) { -cc } else { cc })
            })
            .collect();
        Multivector { dim: self.dim, terms }
    }

    /// Coefficientwise complex conjugation only.
    pub fn coeff_conj(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.conj())).collect();
        Multivector { dim: self.dim, terms }
    }

    /// `[x† y]_0`, computed without forming the full product.
    pub fn inner(&self, other: &Self) -> Result<FieldElement> {
        self.check_dim(other)?;
        let mut acc = FieldElement::zero();
        for (&m, c) in &self.terms {
            if let Some(d) = other.terms.get(&m) {
                // ē_A e_A = 1 for every blade, so only the coefficient conjugate survives
                let v = &c.conj() * d;
                acc += &v;
            }
        }
        Ok(acc)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.product(other)?.try_sub(&other.product(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.product(other)?.try_add(&other.product(self)?)
    }

    /// Coefficients of the grade-1 part as a dense vector.
    pub fn vector_coords(&self) -> Result<Vec<FieldElement>> {
        if !self.is_homogeneous(1) {
            return Err(Error::InvalidArgument("not a 1-vector".into()));
        }
        Ok((0..self.dim).map(|k| self.coeff(1 << k)).collect())
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(|m| blade_grade(*m)).max().unwrap_or(0)
    }
}

impl<'a> Mul<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn mul(self, o: &Multivector) -> Multivector {
        self.product(o).expect("multivector dimensions differ")
    }
}

impl<'a> Add<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn add(self, o: &Multivector) -> Multivector {
        self.try_add(o).expect("multivector dimensions differ")
    }
}

impl<'a> Sub<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn sub(self, o: &Multivector) -> Multivector {
        self.try_sub(o).expect("multivector dimensions differ")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(&FieldElement::from_int(-1))
    }
}

macro_rules! forward_owned_mv {
    ($tr:ident, $m:ident) => {
        impl $tr<Multivector> for Multivector {
            type Output = Multivector;
            fn $m(self, o: Multivector) -> Multivector {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned_mv!(Add, add);
forward_owned_mv!(Sub, sub);
forward_owned_mv!(Mul, mul);

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let blade: String = blade_indices(m).iter().map(|i| format!("e{i}")).collect();
            if blade.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}){blade}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    blade: Vec<usize>,
    coeff: FieldElement,
}

#[derive(Serialize, Deserialize)]
struct MultivectorJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultivectorJson {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| TermJson { blade: blade_indices(*m), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MultivectorJson::deserialize(d)?;
        if raw.dim > MAX_DIM {
            return Err(D::Error::custom(format!("dimension {} too large", raw.dim)));
        }
        let mut m = Multivector::zero(raw.dim);
        for t in raw.terms {
            let term = Multivector::blade(raw.dim, &t.blade, t.coeff).map_err(D::Error::custom)?;
            m = m.try_add(&term).map_err(D::Error::custom)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, idx: &[usize]) -> Multivector {
        Multivector::blade(dim, idx, FieldElement::one()).unwrap()
    }

    #[test]
    fn generator_rules() {
        let one = Multivector::one(4);
        assert_eq!(&e(4, &[1]) * &e(4, &[1]), -&one);
        assert_eq!(&e(4, &[1]) * &e(4, &[2]), e(4, &[1, 2]));
        assert_eq!(&e(4, &[2]) * &e(4, &[1]), -&e(4, &[1, 2]));
        assert_eq!(&e(4, &[1, 2]) * &e(4, &[1, 2]), -&one);
        assert_eq!(e(4, &[2, 1]), -&e(4, &[1, 2]));
    }

    #[test]
    fn conjugations() {
        assert_eq!(e(4, &[1]).clifford_conj(), -&e(4, &[1]));
        assert_eq!(e(4, &[1, 2]).clifford_conj(), -&e(4, &[1, 2]));
        assert_eq!(Multivector::one(4).clifford_conj(), Multivector::one(4));
        let ie1 = e(4, &[1]).scale(&FieldElement::i());
        assert_eq!(ie1.hermitian_conj(), ie1);
    }

    #[test]
    fn inner_products() {
        assert_eq!(e(4, &[1]).inner(&e(4, &[1])).unwrap(), FieldElement::one());
        assert_eq!(Multivector::one(4).inner(&e(4, &[1])).unwrap(), FieldElement::zero());
        assert_eq!(e(4, &[1, 2]).inner(&e(4, &[1, 2])).unwrap(), FieldElement::one());
        let x = e(4, &[1, 3]).scale(&FieldElement::i());
        let full = x.hermitian_conj().product(&e(4, &[1, 3])).unwrap().scalar_part();
        assert_eq!(x.inner(&e(4, &[1, 3])).unwrap(), full);
    }

    #[test]
    fn grades() {
        let x = &(&Multivector::scalar(4, FieldElement::from_int(3)) + &e(4, &[1]).scale(&FieldElement::from_int(2)))
            + &e(4, &[1, 2]);
        assert_eq!(x.grade(1), e(4, &[1]).scale(&FieldElement::from_int(2)));
        assert_eq!(x.grade(0), Multivector::scalar(4, FieldElement::from_int(3)));
    }

    #[test]
    fn dimension_checked() {
        assert_eq!(e(4, &[1]).product(&e(8, &[1])), Err(Error::DimensionMismatch { left: 4, right: 8 }));
        assert!(Multivector::basis_vector(4, 5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = &e(4, &[1, 2]).scale(&FieldElement::i()) + &Multivector::one(4);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with(r#"{"dim":4,"terms":[{"blade":[],"coeff""#));
        let y: Multivector = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
