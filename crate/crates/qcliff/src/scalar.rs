//! Exact arithmetic in Q(i, sqrt 2).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a + b i + c sqrt2 + d i sqrt2` with reduced rational components.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FieldElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

// (x0 + x1 sqrt2)(y0 + y1 sqrt2), skipping zero parts.
fn mul_r2(x0: &Rational, x1: &Rational, y0: &Rational, y1: &Rational) -> (Rational, Rational) {
    let mut r0 = Rational::zero();
    let mut r1 = Rational::zero();
    if !x0.is_zero() {
        if !y0.is_zero() {
            r0 += x0 * y0;
        }
        if !y1.is_zero() {
            r1 += x0 * y1;
        }
    }
    if !x1.is_zero() {
        if !y1.is_zero() {
            r0 += (x1 * y1) * rat_int(2);
        }
        if !y0.is_zero() {
            r1 += x1 * y0;
        }
    }
    (r0, r1)
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        FieldElement { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        FieldElement { b: Rational::one(), ..Self::default() }
    }

    pub fn sqrt2() -> Self {
        FieldElement { c: Rational::one(), ..Self::default() }
    }

    pub fn from_rational(a: Rational) -> Self {
        FieldElement { a, ..Self::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `re + im i` with rational parts.
    pub fn complex(re: Rational, im: Rational) -> Self {
        FieldElement { a: re, b: im, ..Self::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the value is an ordinary rational number.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when complex conjugation fixes the value.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.d.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Real part, sqrt2 kept.
    pub fn re(&self) -> Self {
        FieldElement { a: self.a.clone(), c: self.c.clone(), ..Self::default() }
    }

    /// Imaginary part as a real element.
    pub fn im(&self) -> Self {
        FieldElement { a: self.b.clone(), c: self.d.clone(), ..Self::default() }
    }

    pub fn conj(&self) -> Self {
        FieldElement { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: -&self.d }
    }

    /// The automorphism sqrt2 -> -sqrt2.
    pub fn sigma(&self) -> Self {
        FieldElement { a: self.a.clone(), b: self.b.clone(), c: -&self.c, d: -&self.d }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        FieldElement { a: &self.a * r, b: &self.b * r, c: &self.c * r, d: &self.d * r }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x conj(x) lies in Q(sqrt2); its norm down to Q is a nonzero rational.
        let n = self * &self.conj();
        let n_bar = n.sigma();
        let q = (&n * &n_bar).a;
        let num = &self.conj() * &n_bar;
        Ok(num.scale(&(Rational::one() / q)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        FieldElement::from_rational(r)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a + &o.a, b: &self.b + &o.b, c: &self.c + &o.c, d: &self.d + &o.d }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c, d: &self.d - &o.d }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        // (u + i v)(u' + i v') with u, v in Q(sqrt2)
        let (uu0, uu1) = mul_r2(&self.a, &self.c, &o.a, &o.c);
        let (vv0, vv1) = mul_r2(&self.b, &self.d, &o.b, &o.d);
        let (uv0, uv1) = mul_r2(&self.a, &self.c, &o.b, &o.d);
        let (vu0, vu1) = mul_r2(&self.b, &self.d, &o.a, &o.c);
        FieldElement { a: uu0 - vv0, c: uu1 - vv1, b: uv0 + vu0, d: uv1 + vu1 }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, o: &FieldElement) {
        if !o.a.is_zero() {
            self.a += &o.a;
        }
        if !o.b.is_zero() {
            self.b += &o.b;
        }
        if !o.c.is_zero() {
            self.c += &o.c;
        }
        if !o.d.is_zero() {
            self.d += &o.d;
        }
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, o: &FieldElement) {
        if !o.a.is_zero() {
            self.a -= &o.a;
        }
        if !o.b.is_zero() {
            self.b -= &o.b;
        }
        if !o.c.is_zero() {
            self.c -= &o.c;
        }
        if !o.d.is_zero() {
            self.d -= &o.d;
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(&self.a, ""), (&self.b, "i"), (&self.c, "√2"), (&self.d, "i√2")];
        let mut out = String::new();
        for (r, unit) in parts {
            if r.is_zero() {
                continue;
            }
            let neg = r.is_negative();
            let mag = r.abs();
            let body = if unit.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                unit.to_string()
            } else if mag.denom().is_one() {
                format!("{}{}", mag.numer(), unit)
            } else {
                format!("({}){}", fmt_rational(&mag), unit)
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn parse_rational(pair: &[String; 2]) -> Result<Rational> {
    let n: BigInt = pair[0].trim().parse().map_err(|_| Error::Parse(format!("bad integer {:?}", pair[0])))?;
    let d: BigInt = pair[1].trim().parse().map_err(|_| Error::Parse(format!("bad integer {:?}", pair[1])))?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let enc = |r: &Rational| [r.numer().to_string(), r.denom().to_string()];
        [enc(&self.a), enc(&self.b), enc(&self.c), enc(&self.d)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[[String; 2]; 4]>::deserialize(d)?;
        let p = |i: usize| parse_rational(&raw[i]).map_err(D::Error::custom);
        Ok(FieldElement { a: p(0)?, b: p(1)?, c: p(2)?, d: p(3)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> FieldElement {
        FieldElement::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1), rat(d.0, d.1))
    }

    #[test]
    fn small_products() {
        let one_plus_i = fe((1, 1), (1, 1), (0, 1), (0, 1));
        let one_minus_i = one_plus_i.conj();
        assert_eq!(&one_plus_i + &one_minus_i, FieldElement::from_int(2));
        assert_eq!(&one_plus_i * &one_minus_i, FieldElement::from_int(2));
        let half_root = FieldElement::sqrt2().scale(&rat(1, 2));
        assert_eq!(&half_root + &half_root, FieldElement::sqrt2());
        assert_eq!(&half_root * &half_root, FieldElement::from_ratio(1, 2));
        let i_root = fe((0, 1), (0, 1), (0, 1), (1, 1));
        assert_eq!(&i_root * &i_root, FieldElement::from_int(-2));
    }

    #[test]
    fn inverses() {
        assert_eq!(FieldElement::from_int(2).inv().unwrap(), FieldElement::from_ratio(1, 2));
        assert_eq!(FieldElement::sqrt2().inv().unwrap(), FieldElement::sqrt2().scale(&rat(1, 2)));
        let one_plus_i = fe((1, 1), (1, 1), (0, 1), (0, 1));
        assert_eq!(one_plus_i.inv().unwrap(), fe((1, 2), (-1, 2), (0, 1), (0, 1)));
        assert_eq!(FieldElement::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn conjugation() {
        assert_eq!(FieldElement::i().conj(), -FieldElement::i());
        assert_eq!(FieldElement::from_ratio(3, 5).conj(), FieldElement::from_ratio(3, 5));
        let i_root = fe((0, 1), (0, 1), (0, 1), (1, 1));
        assert_eq!(i_root.conj(), -&i_root);
    }

    #[test]
    fn json_shape() {
        let x = fe((1, 2), (-3, 1), (0, 1), (5, 7));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"[["1","2"],["-3","1"],["0","1"],["5","7"]]"#);
        let y: FieldElement = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn display() {
        assert_eq!(fe((1, 2), (-1, 2), (0, 1), (0, 1)).to_string(), "1/2 - (1/2)i");
        assert_eq!(FieldElement::zero().to_string(), "0");
        assert_eq!(FieldElement::sqrt2().to_string(), "√2");
    }
}
