//! Clifford-valued polynomials on `R^{4p}` and the Dirac operator, its twists by 𝕀, 𝕁, 𝕂,
//! the hermitian Dirac operators and their 𝕁-twists.
//!
//! Coordinates are `X_1, ..., X_{4p}` with `x_k = X_{2k-1}`, `y_k = X_{2k}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::groups::{double_cover_matrix, structure_triple, SpinElement, Structure};
use crate::linalg::Matrix;
use crate::scalar::FieldElement;
use crate::witt::{algebra_dim, f, fd, spinor_decompose, spinor_homogeneous_part, spinor_monomial, subsets};

/// `Π X_α^{k_α}`, keyed by variable index `1..=4p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    exps: BTreeMap<usize, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(alpha: usize) -> Self {
        Self::from_exps([(alpha, 1)])
    }

    pub fn from_exps<I: IntoIterator<Item = (usize, u32)>>(exps: I) -> Self {
        let mut m = BTreeMap::new();
        for (a, k) in exps {
            if k > 0 {
                *m.entry(a).or_insert(0) += k;
            }
        }
        Monomial { exps: m }
    }

    pub fn exps(&self) -> &BTreeMap<usize, u32> {
        &self.exps
    }

    pub fn exponent(&self, alpha: usize) -> u32 {
        self.exps.get(&alpha).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn max_var(&self) -> usize {
        self.exps.keys().next_back().copied().unwrap_or(0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::from_exps(self.exps.iter().chain(o.exps.iter()).map(|(&a, &k)| (a, k)))
    }

    /// `∂_α` as (coefficient, monomial).
    pub fn partial(&self, alpha: usize) -> Option<(u32, Monomial)> {
        let k = self.exponent(alpha);
        if k == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        if k == 1 {
            exps.remove(&alpha);
        } else {
            exps.insert(alpha, k - 1);
        }
        Some((k, Monomial { exps }))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.exps.iter().map(|(a, k)| if *k == 1 { format!("X{a}") } else { format!("X{a}^{k}") }).collect();
        f.write_str(&parts.join(" "))
    }
}

/// All monomials in `n` variables of total degree exactly `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(var: usize, n: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if var > n {
            if left == 0 {
                out.push(Monomial::from_exps(cur.iter().copied()));
            }
            return;
        }
        for k in (0..=left).rev() {
            cur.push((var, k));
            rec(var + 1, n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, d, &mut Vec::new(), &mut out);
    out
}

pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

/// `Σ monomial · multivector` with values in `C_{4p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordPolynomial {
    p: usize,
    terms: BTreeMap<Monomial, Multivector>,
}

impl CliffordPolynomial {
    pub fn zero(p: usize) -> Self {
        CliffordPolynomial { p, terms: BTreeMap::new() }
    }

    pub fn constant(p: usize, value: Multivector) -> Result<Self> {
        Self::from_terms(p, [(Monomial::one(), value)])
    }

    pub fn term(p: usize, m: Monomial, value: Multivector) -> Result<Self> {
        Self::from_terms(p, [(m, value)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Multivector)>>(p: usize, terms: I) -> Result<Self> {
        let mut out = Self::zero(p);
        for (m, v) in terms {
            out.add_term(m, v)?;
        }
        Ok(out)
    }

    /// The scalar polynomial `X_α`.
    pub fn var(p: usize, alpha: usize) -> Result<Self> {
        Self::term(p, Monomial::var(alpha), Multivector::one(algebra_dim(p)))
    }

    /// `z_k = x_k + i y_k`.
    pub fn z(p: usize, k: usize) -> Result<Self> {
        let one = Multivector::one(algebra_dim(p));
        Self::from_terms(p, [(Monomial::var(2 * k - 1), one.clone()), (Monomial::var(2 * k), one.scale(&FieldElement::i()))])
    }

    /// `z̄_k = x_k - i y_k`.
    pub fn zbar(p: usize, k: usize) -> Result<Self> {
        let one = Multivector::one(algebra_dim(p));
        Self::from_terms(p, [(Monomial::var(2 * k - 1), one.clone()), (Monomial::var(2 * k), one.scale(&-FieldElement::i()))])
    }

    /// The Clifford variable `X = Σ X_α e_α`.
    pub fn clifford_variable(p: usize) -> Result<Self> {
        let m = algebra_dim(p);
        Self::from_terms(p, (1..=m).map(|a| (Monomial::var(a), Multivector::basis_vector(m, a).expect("index in range"))))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        algebra_dim(self.p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Multivector)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Multivector {
        self.terms.get(m).cloned().unwrap_or_else(|| Multivector::zero(self.dim()))
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

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, v: Multivector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: v.dim() });
        }
        if m.max_var() > self.dim() {
            return Err(Error::IndexOutOfRange(format!("X{} with 4p = {}", m.max_var(), self.dim())));
        }
        if v.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old.try_add(&v)?,
            None => v,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
        Ok(())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            return Err(Error::DimensionMismatch { left: self.dim(), right: o.dim() });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, v) in &o.terms {
            out.add_term(m.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&FieldElement::from_int(-1)))
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.scale(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        CliffordPolynomial { p: self.p, terms }
    }

    /// Pointwise product, values multiplied in the Clifford algebra.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = Self::zero(self.p);
        for (m1, v1) in &self.terms {
            for (m2, v2) in &o.terms {
                out.add_term(m1.mul(m2), v1.product(v2)?)?;
            }
        }
        Ok(out)
    }

    /// `a · F`.
    pub fn left_mul(&self, a: &Multivector) -> Result<Self> {
        let mut out = Self::zero(self.p);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), a.product(v)?)?;
        }
        Ok(out)
    }

    /// Multiply every value on the right by `a`.
    pub fn right_mul(&self, a: &Multivector) -> Result<Self> {
        let mut out = Self::zero(self.p);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.product(a)?)?;
        }
        Ok(out)
    }

    pub fn partial(&self, alpha: usize) -> Result<Self> {
        let mut out = Self::zero(self.p);
        for (m, v) in &self.terms {
            if let Some((k, dm)) = m.partial(alpha) {
                out.add_term(dm, v.scale(&FieldElement::from_int(k as i64)))?;
            }
        }
        Ok(out)
    }

    /// `Δ = Σ ∂²_α`.
    pub fn laplacian(&self) -> Result<Self> {
        let mut out = Self::zero(self.p);
        for a in 1..=self.dim() {
            out = out.add(&self.partial(a)?.partial(a)?)?;
        }
        Ok(out)
    }

    /// `F(X A)` for a row-vector substitution: `X_β ↦ Σ_α X_α A_{αβ}`.
    pub fn substitute(&self, a: &Matrix) -> Result<Self> {
        let n = self.dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch { left: n, right: a.rows() });
        }
        let forms: Vec<Vec<(usize, FieldElement)>> = (1..=n)
            .map(|b| (1..=n).filter_map(|al| {
                let c = a.get(al - 1, b - 1);
                (!c.is_zero()).then(|| (al, c.clone()))
            }).collect())
            .collect();
        let mut out = Self::zero(self.p);
        for (m, v) in &self.terms {
            // expand Π (Σ_α c_α X_α)^{k}
            let mut acc: BTreeMap<Monomial, FieldElement> = BTreeMap::from([(Monomial::one(), FieldElement::one())]);
            for (&b, &k) in m.exps() {
                for _ in 0..k {
                    let mut next: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
                    for (mm, c) in &acc {
                        for (al, d) in &forms[b - 1] {
                            let e = next.entry(mm.mul(&Monomial::var(*al))).or_insert_with(FieldElement::zero);
                            *e += &(c * d);
                        }
                    }
                    next.retain(|_, c| !c.is_zero());
                    acc = next;
                }
            }
            for (mm, c) in acc {
                out.add_term(mm, v.scale(&c))?;
            }
        }
        Ok(out)
    }

    /// Homogeneous spinor part `F^r`; every value must be a spinor.
    pub fn spinor_component(&self, r: usize) -> Result<Self> {
        let mut out = Self::zero(self.p);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), spinor_homogeneous_part(self.p, v, r)?)?;
        }
        Ok(out)
    }

    pub fn is_spinor_valued(&self) -> bool {
        self.terms.values().all(|v| spinor_decompose(self.p, v).is_ok())
    }
}

impl fmt::Display for CliffordPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, v)| format!("({v}) {m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: BTreeMap<usize, u32>,
    mv: Multivector,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: usize,
    terms: Vec<TermJson>,
}

impl Serialize for CliffordPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            p: self.p,
            terms: self.terms.iter().map(|(m, v)| TermJson { exps: m.exps.clone(), mv: v.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CliffordPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        if raw.p == 0 {
            return Err(serde::de::Error::custom("p must be positive"));
        }
        CliffordPolynomial::from_terms(raw.p, raw.terms.into_iter().map(|t| (Monomial::from_exps(t.exps), t.mv)))
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiracKind {
    D,
    #[serde(rename = "D_I")]
    DI,
    #[serde(rename = "D_J")]
    DJ,
    #[serde(rename = "D_K")]
    DK,
    #[serde(rename = "dz")]
    Dz,
    #[serde(rename = "dz_dag")]
    DzDag,
    #[serde(rename = "dzJ")]
    DzJ,
    #[serde(rename = "dzJ_dag")]
    DzJDag,
}

impl DiracKind {
    pub const ALL: [DiracKind; 8] =
        [DiracKind::D, DiracKind::DI, DiracKind::DJ, DiracKind::DK, DiracKind::Dz, DiracKind::DzDag, DiracKind::DzJ, DiracKind::DzJDag];
}

impl fmt::Display for DiracKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiracKind::D => "D",
            DiracKind::DI => "D_I",
            DiracKind::DJ => "D_J",
            DiracKind::DK => "D_K",
            DiracKind::Dz => "dz",
            DiracKind::DzDag => "dz_dag",
            DiracKind::DzJ => "dzJ",
            DiracKind::DzJDag => "dzJ_dag",
        })
    }
}

impl std::str::FromStr for DiracKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DiracKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown operator {s:?}")))
    }
}

/// First-order operator `Σ_α v_α ∂_{X_α}` with vector symbols `v_α` acting on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracOperator {
    p: usize,
    symbol: Vec<Multivector>,
}

impl DiracOperator {
    pub fn from_symbol(p: usize, symbol: Vec<Multivector>) -> Result<Self> {
        let m = algebra_dim(p);
        if symbol.len() != m || symbol.iter().any(|v| v.dim() != m) {
            return Err(Error::DimensionMismatch { left: m, right: symbol.len() });
        }
        Ok(DiracOperator { p, symbol })
    }

    pub fn symbol(&self) -> &[Multivector] {
        &self.symbol
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn apply(&self, f: &CliffordPolynomial) -> Result<CliffordPolynomial> {
        if f.p() != self.p {
            return Err(Error::DimensionMismatch { left: algebra_dim(self.p), right: f.dim() });
        }
        let mut out = CliffordPolynomial::zero(self.p);
        for (a, v) in self.symbol.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            out = out.add(&f.partial(a + 1)?.left_mul(v)?)?;
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let symbol = self.symbol.iter().zip(&o.symbol).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Self::from_symbol(self.p, symbol)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&FieldElement::from_int(-1)))
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        DiracOperator { p: self.p, symbol: self.symbol.iter().map(|v| v.scale(c)).collect() }
    }

    /// Apply a structure matrix to the vector part of the symbol.
    pub fn twisted(&self, which: Structure) -> Result<Self> {
        let t = structure_triple(self.p)?;
        let symbol = self.symbol.iter().map(|v| twist_vector_value(t.get(which), v)).collect::<Result<_>>()?;
        Self::from_symbol(self.p, symbol)
    }
}

/// `𝕄[v]` for a (complex) vector `v`, row convention.
pub fn twist_vector_value(m: &Matrix, v: &Multivector) -> Result<Multivector> {
    if v.is_zero() {
        return Ok(v.clone());
    }
    let coords = v.vector_coords()?;
    Multivector::vector(v.dim(), &m.apply_row(&coords)?)
}

pub fn dirac_operator(p: usize, kind: DiracKind) -> Result<DiracOperator> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let m = algebra_dim(p);
    let e: Vec<Multivector> = (1..=m).map(|a| Multivector::basis_vector(m, a)).collect::<Result<_>>()?;
    let half = FieldElement::from_ratio(1, 2);
    let i = FieldElement::i();
    let zero = || vec![Multivector::zero(m); m];
    // ∂_{z_k} = ½(∂_{x_k} - i∂_{y_k}), ∂_{z̄_k} = ½(∂_{x_k} + i∂_{y_k})
    let dz_term = |sym: &mut Vec<Multivector>, k: usize, v: &Multivector, conj: bool| -> Result<()> {
        let s = if conj { i.clone() } else { -&i };
        sym[2 * k - 2] = sym[2 * k - 2].try_add(&v.scale(&half))?;
        sym[2 * k - 1] = sym[2 * k - 1].try_add(&v.scale(&(&half * &s)))?;
        Ok(())
    };
    let symbol = match kind {
        DiracKind::D => e,
        DiracKind::DI => return dirac_operator(p, DiracKind::D)?.twisted(Structure::I),
        DiracKind::DJ => return dirac_operator(p, DiracKind::D)?.twisted(Structure::J),
        DiracKind::DK => return dirac_operator(p, DiracKind::D)?.twisted(Structure::K),
        DiracKind::Dz => {
            let mut s = zero();
            for k in 1..=2 * p {
                dz_term(&mut s, k, &fd(p, k), false)?;
            }
            s
        }
        DiracKind::DzDag => {
            let mut s = zero();
            for k in 1..=2 * p {
                dz_term(&mut s, k, &f(p, k), true)?;
            }
            s
        }
        DiracKind::DzJ => {
            let mut s = zero();
            for j in 1..=p {
                dz_term(&mut s, 2 * j, &f(p, 2 * j - 1), false)?;
                dz_term(&mut s, 2 * j - 1, &-&f(p, 2 * j), false)?;
            }
            s
        }
        DiracKind::DzJDag => {
            let mut s = zero();
            for j in 1..=p {
                dz_term(&mut s, 2 * j, &fd(p, 2 * j - 1), true)?;
                dz_term(&mut s, 2 * j - 1, &-&fd(p, 2 * j), true)?;
            }
            s
        }
    };
    DiracOperator::from_symbol(p, symbol)
}

pub fn apply_dirac(kind: DiracKind, f: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    dirac_operator(f.p(), kind)?.apply(f)
}

/// `𝕄[X]` for a polynomial with vector values.
pub fn twist_vector(which: Structure, x: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    let t = structure_triple(x.p())?;
    let mut out = CliffordPolynomial::zero(x.p());
    for (m, v) in x.terms() {
        if !v.is_homogeneous(1) {
            return Err(Error::InvalidArgument(format!("value at {m} is not a vector")));
        }
        out.add_term(m.clone(), twist_vector_value(t.get(which), v)?)?;
    }
    Ok(out)
}

/// Every spinor-valued monomial `X^a f†_A I` of degree at most `d`.
pub fn spanning_set(p: usize, d: u32) -> Result<Vec<CliffordPolynomial>> {
    let spinors: Vec<Multivector> =
        (0..=2 * p).flat_map(|r| subsets(2 * p, r)).map(|s| spinor_monomial(p, s)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for m in monomials_up_to(algebra_dim(p), d) {
        for s in &spinors {
            out.push(CliffordPolynomial::term(p, m.clone(), s.clone())?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub symbol_equal: bool,
    pub applied_equal: bool,
}

impl IdentityCheck {
    pub fn ok(&self) -> bool {
        self.symbol_equal && self.applied_equal
    }
}

fn spinor_monomials(p: usize) -> Result<Vec<Multivector>> {
    (0..=2 * p).flat_map(|r| subsets(2 * p, r)).map(|s| spinor_monomial(p, s)).collect()
}

/// `v_α s` for each symbol entry `v_α` and spinor monomial `s`, indexed `[α][s]`.
fn first_table(op: &DiracOperator, spinors: &[Multivector]) -> Result<Vec<Vec<Multivector>>> {
    op.symbol.iter().map(|v| spinors.iter().map(|s| v.product(s)).collect()).collect()
}

/// `v_α w_β s` for the composition `A ∘ B`, indexed `[α][β][s]`.
fn second_table(a: &DiracOperator, b_table: &[Vec<Multivector>]) -> Result<Vec<Vec<Vec<Multivector>>>> {
    a.symbol
        .iter()
        .map(|v| b_table.iter().map(|row| row.iter().map(|x| v.product(x)).collect()).collect())
        .collect()
}

fn apply_first(p: usize, table: &[Vec<Multivector>], m: &Monomial, s: usize) -> Result<CliffordPolynomial> {
    let mut out = CliffordPolynomial::zero(p);
    for (a, row) in table.iter().enumerate() {
        if let Some((k, dm)) = m.partial(a + 1) {
            out.add_term(dm, row[s].scale(&FieldElement::from_int(k as i64)))?;
        }
    }
    Ok(out)
}

fn apply_second(p: usize, table: &[Vec<Vec<Multivector>>], m: &Monomial, s: usize) -> Result<CliffordPolynomial> {
    let mut out = CliffordPolynomial::zero(p);
    for (a, rows) in table.iter().enumerate() {
        let Some((k, dm)) = m.partial(a + 1) else { continue };
        for (b, row) in rows.iter().enumerate() {
            if let Some((l, ddm)) = dm.partial(b + 1) {
                out.add_term(ddm, row[s].scale(&FieldElement::from_int((k * l) as i64)))?;
            }
        }
    }
    Ok(out)
}

fn all_terms(p: usize, degree: u32, n_spinors: usize) -> Vec<(Monomial, usize)> {
    monomials_up_to(algebra_dim(p), degree).into_iter().flat_map(|m| (0..n_spinors).map(move |s| (m.clone(), s))).collect()
}

fn all_true(results: Vec<Result<bool>>) -> Result<bool> {
    let mut ok = true;
    for r in results {
        ok &= r?;
    }
    Ok(ok)
}

fn check_pair(name: &str, lhs: &DiracOperator, rhs: &DiracOperator, degree: u32) -> Result<IdentityCheck> {
    let p = lhs.p;
    let spinors = spinor_monomials(p)?;
    let (tl, tr) = (first_table(lhs, &spinors)?, first_table(rhs, &spinors)?);
    let terms = all_terms(p, degree, spinors.len());
    let applied_equal = all_true(
        terms.par_iter().map(|(m, s)| Ok(apply_first(p, &tl, m, *s)? == apply_first(p, &tr, m, *s)?)).collect(),
    )?;
    Ok(IdentityCheck { name: name.to_string(), symbol_equal: lhs == rhs, applied_equal })
}

/// `-∂² = Δ` and the vanishing squares of the hermitian operators and their 𝕁-twists,
/// on all spinor-valued monomials of degree at most `degree`.
pub fn second_order_suite(p: usize, degree: u32) -> Result<Vec<IdentityCheck>> {
    let spinors = spinor_monomials(p)?;
    let terms = all_terms(p, degree, spinors.len());
    let square = |k| -> Result<Vec<Vec<Vec<Multivector>>>> {
        let op = dirac_operator(p, k)?;
        second_table(&op, &first_table(&op, &spinors)?)
    };
    let d2 = square(DiracKind::D)?;
    let laplace_ok = all_true(
        terms
            .par_iter()
            .map(|(m, s)| {
                let lhs = apply_second(p, &d2, m, *s)?.scale(&FieldElement::from_int(-1));
                Ok(lhs == CliffordPolynomial::term(p, m.clone(), spinors[*s].clone())?.laplacian()?)
            })
            .collect(),
    )?;
    let mut out = vec![IdentityCheck { name: "-D^2 = Laplacian".into(), symbol_equal: laplace_ok, applied_equal: laplace_ok }];
    for k in [DiracKind::Dz, DiracKind::DzDag, DiracKind::DzJ, DiracKind::DzJDag] {
        let t = square(k)?;
        let ok = all_true(terms.par_iter().map(|(m, s)| Ok(apply_second(p, &t, m, *s)?.is_zero())).collect())?;
        out.push(IdentityCheck { name: format!("{k}^2 = 0"), symbol_equal: ok, applied_equal: ok });
    }
    Ok(out)
}

/// The linear relations between the eight operators, checked on the symbols and on all
/// spinor-valued monomials of degree at most `degree`.
pub fn operator_identity_suite(p: usize, degree: u32) -> Result<Vec<IdentityCheck>> {
    let op = |k| dirac_operator(p, k);
    let (d, di, dj, dk) = (op(DiracKind::D)?, op(DiracKind::DI)?, op(DiracKind::DJ)?, op(DiracKind::DK)?);
    let (dz, dzd, dzj, dzjd) = (op(DiracKind::Dz)?, op(DiracKind::DzDag)?, op(DiracKind::DzJ)?, op(DiracKind::DzJDag)?);
    let two = FieldElement::from_int(2);
    let i = FieldElement::i();
    let quarter = FieldElement::from_ratio(1, 4);
    let half = FieldElement::from_ratio(1, 2);
    let mut out = vec![
        check_pair("D = 2(dz - dz_dag)", &d, &dz.sub(&dzd)?.scale(&two), degree)?,
        check_pair("i D_I = 2(dz + dz_dag)", &di.scale(&i), &dz.add(&dzd)?.scale(&two), degree)?,
        check_pair("D_J = 2(dzJ - dzJ_dag)", &dj, &dzj.sub(&dzjd)?.scale(&two), degree)?,
        check_pair("i D_K = 2(dzJ + dzJ_dag)", &dk.scale(&i), &dzj.add(&dzjd)?.scale(&two), degree)?,
        check_pair("dz = 1/4 (1 + i I)[D]", &dz, &d.add(&di.scale(&i))?.scale(&quarter), degree)?,
        check_pair("dz_dag = -1/4 (1 - i I)[D]", &dzd, &d.sub(&di.scale(&i))?.scale(&-&quarter), degree)?,
        check_pair("dzJ = 1/4 (J + i K)[D]", &dzj, &dj.add(&dk.scale(&i))?.scale(&quarter), degree)?,
        check_pair("dzJ_dag = -1/4 (J - i K)[D]", &dzjd, &dj.sub(&dk.scale(&i))?.scale(&-&quarter), degree)?,
        check_pair("dzJ = J[dz]", &dzj, &dz.twisted(Structure::J)?, degree)?,
        check_pair("dzJ_dag = J[dz_dag]", &dzjd, &dzd.twisted(Structure::J)?, degree)?,
        // ½(1 ± j𝕁)[D] with j a formal commuting symbol: the 1-part and the j-part
        check_pair("1/2 D = dz - dz_dag", &d.scale(&half), &dz.sub(&dzd)?, degree)?,
        check_pair("1/2 J[D] = dzJ - dzJ_dag", &dj.scale(&half), &dzj.sub(&dzjd)?, degree)?,
    ];
    out.push(witt_twist_table(p)?);
    Ok(out)
}

/// `𝕁[f_{2j-1}] = -f†_{2j}`, `𝕁[f_{2j}] = f†_{2j-1}`, `𝕁[f†_{2j-1}] = -f_{2j}`, `𝕁[f†_{2j}] = f_{2j-1}`.
pub fn witt_twist_table(p: usize) -> Result<IdentityCheck> {
    let t = structure_triple(p)?;
    let mut ok = true;
    for j in 1..=p {
        let (o, e) = (2 * j - 1, 2 * j);
        ok &= twist_vector_value(&t.j, &f(p, o))? == -&fd(p, e);
        ok &= twist_vector_value(&t.j, &f(p, e))? == fd(p, o);
        ok &= twist_vector_value(&t.j, &fd(p, o))? == -&f(p, e);
        ok &= twist_vector_value(&t.j, &fd(p, e))? == f(p, o);
    }
    Ok(IdentityCheck { name: "J on the Witt basis".into(), symbol_equal: ok, applied_equal: ok })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonogenicSystem {
    Euclidean,
    Hermitian,
    Quaternionic,
}

impl MonogenicSystem {
    pub fn operators(self) -> &'static [DiracKind] {
        match self {
            MonogenicSystem::Euclidean => &[DiracKind::D],
            MonogenicSystem::Hermitian => &[DiracKind::D, DiracKind::DI],
            MonogenicSystem::Quaternionic => &[DiracKind::D, DiracKind::DI, DiracKind::DJ, DiracKind::DK],
        }
    }

    /// The equivalent system of hermitian operators.
    pub fn hermitian_operators(self) -> &'static [DiracKind] {
        match self {
            MonogenicSystem::Euclidean => &[DiracKind::D],
            MonogenicSystem::Hermitian => &[DiracKind::Dz, DiracKind::DzDag],
            MonogenicSystem::Quaternionic => &[DiracKind::Dz, DiracKind::DzDag, DiracKind::DzJ, DiracKind::DzJDag],
        }
    }
}

impl std::str::FromStr for MonogenicSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(MonogenicSystem::Euclidean),
            "hermitian" => Ok(MonogenicSystem::Hermitian),
            "quaternionic" => Ok(MonogenicSystem::Quaternionic),
            _ => Err(Error::Parse(format!("unknown system {s:?}"))),
        }
    }
}

impl fmt::Display for MonogenicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonogenicSystem::Euclidean => "euclidean",
            MonogenicSystem::Hermitian => "hermitian",
            MonogenicSystem::Quaternionic => "quaternionic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonogenicVerdict {
    pub monogenic: bool,
    /// First operator with a nonzero image, and that image.
    pub witness: Option<(DiracKind, CliffordPolynomial)>,
}

pub fn check_operators(kinds: &[DiracKind], f: &CliffordPolynomial) -> Result<MonogenicVerdict> {
    for &k in kinds {
        let image = apply_dirac(k, f)?;
        if !image.is_zero() {
            return Ok(MonogenicVerdict { monogenic: false, witness: Some((k, image)) });
        }
    }
    Ok(MonogenicVerdict { monogenic: true, witness: None })
}

pub fn is_monogenic(f: &CliffordPolynomial, system: MonogenicSystem) -> Result<MonogenicVerdict> {
    check_operators(system.operators(), f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    /// `(r, F^r)` for the nonzero components.
    pub components: Vec<(usize, CliffordPolynomial)>,
    pub reconstructs: bool,
    pub hermitian: bool,
    pub component_monogenic: Vec<(usize, bool)>,
    /// `∂_z F^r` valued in `𝕊^{r+1}` and `∂_z† F^r` in `𝕊^{r-1}`.
    pub mapping_ok: bool,
    pub failing_component: Option<usize>,
}

impl ComponentReport {
    pub fn consistent(&self) -> bool {
        let all = self.component_monogenic.iter().all(|(_, b)| *b);
        self.reconstructs && self.mapping_ok && self.hermitian == all
    }
}

fn valued_in_degree(f: &CliffordPolynomial, r: Option<usize>) -> Result<bool> {
    for (_, v) in f.terms() {
        let coeffs = spinor_decompose(f.p(), v)?;
        if coeffs.keys().any(|s| Some(s.count_ones() as usize) != r) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn hermitian_componentwise_check(f: &CliffordPolynomial) -> Result<ComponentReport> {
    if !f.is_spinor_valued() {
        return Err(Error::NotInSpan("polynomial is not spinor valued".into()));
    }
    let p = f.p();
    let mut components = Vec::new();
    let mut sum = CliffordPolynomial::zero(p);
    for r in 0..=2 * p {
        let c = f.spinor_component(r)?;
        sum = sum.add(&c)?;
        if !c.is_zero() {
            components.push((r, c));
        }
    }
    let reconstructs = sum == *f;
    let hermitian = is_monogenic(f, MonogenicSystem::Hermitian)?.monogenic;
    let mut component_monogenic = Vec::new();
    let mut mapping_ok = true;
    let mut failing_component = None;
    for (r, c) in &components {
        let ok = is_monogenic(c, MonogenicSystem::Euclidean)?.monogenic;
        if !ok && failing_component.is_none() {
            failing_component = Some(*r);
        }
        component_monogenic.push((*r, ok));
        let up = apply_dirac(DiracKind::Dz, c)?;
        let down = apply_dirac(DiracKind::DzDag, c)?;
        mapping_ok &= up.is_zero() || valued_in_degree(&up, Some(r + 1))?;
        mapping_ok &= down.is_zero() || valued_in_degree(&down, r.checked_sub(1))?;
    }
    Ok(ComponentReport { components, reconstructs, hermitian, component_monogenic, mapping_ok, failing_component })
}

/// `L(s) F (X) = s F(s⁻¹ X s)`.
pub fn l_action(s: &SpinElement, f: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    if s.dim() != f.dim() {
        return Err(Error::DimensionMismatch { left: s.dim(), right: f.dim() });
    }
    // s⁻¹ X s = X A_{s⁻¹} = X A_sᵀ
    let a = double_cover_matrix(s)?.transpose();
    f.substitute(&a)?.left_mul(s.value())
}

/// Basis of the spinor-valued homogeneous polynomials of degree `d` annihilated by a system.
pub fn monogenic_kernel(p: usize, system: MonogenicSystem, d: u32) -> Result<Vec<CliffordPolynomial>> {
    let n = algebra_dim(p);
    let sets: Vec<u32> = (0..=2 * p).flat_map(|r| subsets(2 * p, r)).collect();
    let spinors: Vec<Multivector> = sets.iter().map(|&s| spinor_monomial(p, s)).collect::<Result<_>>()?;
    let monos = monomials_of_degree(n, d);
    let images_monos = if d == 0 { Vec::new() } else { monomials_of_degree(n, d - 1) };
    let ops: Vec<DiracOperator> = system.operators().iter().map(|&k| dirac_operator(p, k)).collect::<Result<_>>()?;
    let row_of = |op: usize, m: &Monomial, s: u32| -> usize {
        let mi = images_monos.iter().position(|x| x == m).expect("image monomial");
        let si = sets.iter().position(|&x| x == s).expect("spinor set");
        (op * images_monos.len() + mi) * sets.len() + si
    };
    let rows = ops.len() * images_monos.len() * sets.len();
    let unknowns: Vec<(usize, usize)> = (0..monos.len()).flat_map(|m| (0..sets.len()).map(move |s| (m, s))).collect();
    let cols: Vec<Vec<FieldElement>> = unknowns
        .par_iter()
        .map(|&(m, s)| -> Result<Vec<FieldElement>> {
            let poly = CliffordPolynomial::term(p, monos[m].clone(), spinors[s].clone())?;
            let mut col = vec![FieldElement::zero(); rows];
            for (oi, op) in ops.iter().enumerate() {
                for (mm, v) in op.apply(&poly)?.terms() {
                    for (set, c) in spinor_decompose(p, v)? {
                        col[row_of(oi, mm, set)] = c;
                    }
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let kernel = if rows == 0 {
        (0..unknowns.len())
            .map(|k| (0..unknowns.len()).map(|j| if j == k { FieldElement::one() } else { FieldElement::zero() }).collect())
            .collect()
    } else {
        Matrix::from_cols(cols, rows)?.kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut poly = CliffordPolynomial::zero(p);
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let (m, s) = unknowns[k];
                    poly.add_term(monos[m].clone(), spinors[s].scale(c))?;
                }
            }
            Ok(poly)
        })
        .collect()
}
