//! Lie algebras of bivectors: spin_𝕀, spin_Q, sl_2p, sp_2p and the sl_p inside sp_2p.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::{cell_basis, op_q, CellLabel, LinearOperator};
use crate::clifford::{blade_from_indices, Blade, Multivector};
use crate::error::{Error, Result};
use crate::groups::phi_inverse;
use crate::groups::bivector_to_skew;
use crate::linalg::{Matrix, SpanSolver};
use crate::scalar::{FieldElement, Rational};
use crate::witt::{f, fd, idempotent, multivector_rank, primitive_idempotent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraTag {
    SpinI,
    SpinQ,
    Sl2p,
    Sp2p,
    SlpInside,
}

impl AlgebraTag {
    pub fn real_dim(self, p: usize) -> usize {
        match self {
            AlgebraTag::SpinI => 4 * p * p,
            AlgebraTag::SpinQ => p * (2 * p + 1),
            AlgebraTag::Sl2p => 2 * (4 * p * p - 1),
            AlgebraTag::Sp2p => 2 * p * (2 * p + 1),
            AlgebraTag::SlpInside => 2 * (p * p - 1),
        }
    }

    /// Number of listed basis elements.
    pub fn basis_len(self, p: usize) -> usize {
        match self {
            AlgebraTag::SpinI | AlgebraTag::SpinQ => self.real_dim(p),
            _ => self.real_dim(p) / 2,
        }
    }

    /// Rank of the Cartan subalgebra, for the complex algebras.
    pub fn cartan_rank(self, p: usize) -> Option<usize> {
        match self {
            AlgebraTag::Sl2p => Some(2 * p - 1),
            AlgebraTag::Sp2p => Some(p),
            AlgebraTag::SlpInside => Some(p - 1),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraTag::SpinI => "spinI",
            AlgebraTag::SpinQ => "spinQ",
            AlgebraTag::Sl2p => "sl2p",
            AlgebraTag::Sp2p => "sp2p",
            AlgebraTag::SlpInside => "slp",
        })
    }
}

impl std::str::FromStr for AlgebraTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spinI" => Ok(AlgebraTag::SpinI),
            "spinQ" => Ok(AlgebraTag::SpinQ),
            "sl2p" => Ok(AlgebraTag::Sl2p),
            "sp2p" => Ok(AlgebraTag::Sp2p),
            "slp" | "slp_inside" => Ok(AlgebraTag::SlpInside),
            _ => Err(Error::Parse(format!("unknown algebra {s:?}"))),
        }
    }
}

/// Whether basis elements are written in the `e_j` or in the Witt basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisForm {
    E,
    Witt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivectorBasis {
    pub algebra: AlgebraTag,
    pub form: BasisForm,
    pub p: usize,
    pub labels: Vec<String>,
    pub elements: Vec<Multivector>,
    pub expected_real_dim: usize,
}

impl BivectorBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `Σ c e_i e_j` with integer `c`.
fn e_form(dim: usize, terms: &[(i64, usize, usize)]) -> Result<Multivector> {
    let mut out = Multivector::zero(dim);
    for &(c, i, j) in terms {
        out = out.try_add(&Multivector::blade(dim, &[i, j], FieldElement::from_int(c))?)?;
    }
    Ok(out)
}

fn prod(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.product(b)
}

/// `f_j f†_j` as a multivector.
fn ij(p: usize, j: usize) -> Multivector {
    idempotent(p, j)
}

fn push(labels: &mut Vec<String>, elements: &mut Vec<Multivector>, label: String, x: Multivector) {
    labels.push(label);
    elements.push(x);
}

fn spin_i_e(p: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    let (n, dim) = (2 * p, 4 * p);
    let (mut l, mut e) = (Vec::new(), Vec::new());
    for j in 1..=n {
        push(&mut l, &mut e, format!("e{}e{}", 2 * j - 1, 2 * j), e_form(dim, &[(1, 2 * j - 1, 2 * j)])?);
    }
    for j in 1..=n {
        for k in j + 1..=n {
            let (a, b, c, d) = (2 * j - 1, 2 * j, 2 * k - 1, 2 * k);
            push(&mut l, &mut e, format!("e{a}e{c}+e{b}e{d}"), e_form(dim, &[(1, a, c), (1, b, d)])?);
            push(&mut l, &mut e, format!("e{a}e{d}-e{b}e{c}"), e_form(dim, &[(1, a, d), (-1, b, c)])?);
        }
    }
    Ok((l, e))
}

fn sl2p_e(p: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    let (n, dim) = (2 * p, 4 * p);
    let (mut l, mut e) = (Vec::new(), Vec::new());
    for j in 1..n {
        let (a, b, c, d) = (2 * j - 1, 2 * j, 2 * j + 1, 2 * j + 2);
        push(&mut l, &mut e, format!("e{a}e{b}-e{c}e{d}"), e_form(dim, &[(1, a, b), (-1, c, d)])?);
    }
    for j in 1..=n {
        for k in j + 1..=n {
            let (a, b, c, d) = (2 * j - 1, 2 * j, 2 * k - 1, 2 * k);
            push(&mut l, &mut e, format!("e{a}e{c}+e{b}e{d}"), e_form(dim, &[(1, a, c), (1, b, d)])?);
        }
    }
    for j in 1..=n {
        for k in j + 1..=n {
            let (a, b, c, d) = (2 * j - 1, 2 * j, 2 * k - 1, 2 * k);
            push(&mut l, &mut e, format!("e{a}e{d}-e{b}e{c}"), e_form(dim, &[(1, a, d), (-1, b, c)])?);
        }
    }
    Ok((l, e))
}

fn sl2p_witt(p: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    let n = 2 * p;
    let (mut l, mut e) = (Vec::new(), Vec::new());
    for j in 1..n {
        push(&mut l, &mut e, format!("f{0}f†{0}-f{1}f†{1}", j + 1, j), ij(p, j + 1).try_sub(&ij(p, j))?);
    }
    for sign in [1i64, -1] {
        for j in 1..=n {
            for k in j + 1..=n {
                let a = prod(&fd(p, j), &f(p, k))?;
                let b = prod(&f(p, j), &fd(p, k))?;
                let (x, s) = if sign > 0 { (a.try_add(&b)?, '+') } else { (a.try_sub(&b)?, '-') };
                push(&mut l, &mut e, format!("f†{j}f{k}{s}f{j}f†{k}"), x);
            }
        }
    }
    Ok((l, e))
}

/// `H_j^sympl = f_{2j} f†_{2j} - f_{2j-1} f†_{2j-1}`.
pub fn h_sympl(p: usize, j: usize) -> Result<Multivector> {
    ij(p, 2 * j).try_sub(&ij(p, 2 * j - 1))
}

/// `H_j^sl = H_j^sympl - H_p^sympl`.
pub fn h_sl(p: usize, j: usize) -> Result<Multivector> {
    h_sympl(p, j)?.try_sub(&h_sympl(p, p)?)
}

/// `H_j = I_j - I_{2p}`.
pub fn h_sl2p(p: usize, j: usize) -> Result<Multivector> {
    ij(p, j).try_sub(&ij(p, 2 * p))
}

fn sp2p_witt(p: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    let (mut l, mut e) = (Vec::new(), Vec::new());
    for j in 1..=p {
        push(&mut l, &mut e, format!("H{j}^sympl"), h_sympl(p, j)?);
    }
    for j in 1..=p {
        let (o, v) = (2 * j - 1, 2 * j);
        push(&mut l, &mut e, format!("f†{o}f{v}"), prod(&fd(p, o), &f(p, v))?);
        push(&mut l, &mut e, format!("f†{v}f{o}"), prod(&fd(p, v), &f(p, o))?);
    }
    for j in 1..=p {
        for k in j + 1..=p {
            let (x1, x2) = sl_pair(p, j, k)?;
            push(&mut l, &mut e, format!("f†{}f{}+f{}f†{}", 2 * j, 2 * k, 2 * j - 1, 2 * k - 1), x1);
            push(&mut l, &mut e, format!("f†{}f{}+f{}f†{}", 2 * k, 2 * j, 2 * k - 1, 2 * j - 1), x2);
        }
    }
    for j in 1..=p {
        for k in j + 1..=p {
            let y1 = prod(&f(p, 2 * j), &fd(p, 2 * k - 1))?.try_sub(&prod(&fd(p, 2 * j - 1), &f(p, 2 * k))?)?;
            let y2 = prod(&f(p, 2 * k - 1), &fd(p, 2 * j))?.try_sub(&prod(&fd(p, 2 * k), &f(p, 2 * j - 1))?)?;
            push(&mut l, &mut e, format!("f{}f†{}-f†{}f{}", 2 * j, 2 * k - 1, 2 * j - 1, 2 * k), y1);
            push(&mut l, &mut e, format!("f{}f†{}-f†{}f{}", 2 * k - 1, 2 * j, 2 * k, 2 * j - 1), y2);
        }
    }
    Ok((l, e))
}

/// `f†_{2j} f_{2k} + f_{2j-1} f†_{2k-1}` and `f†_{2k} f_{2j} + f_{2k-1} f†_{2j-1}`.
fn sl_pair(p: usize, j: usize, k: usize) -> Result<(Multivector, Multivector)> {
    let x1 = prod(&fd(p, 2 * j), &f(p, 2 * k))?.try_add(&prod(&f(p, 2 * j - 1), &fd(p, 2 * k - 1))?)?;
    let x2 = prod(&fd(p, 2 * k), &f(p, 2 * j))?.try_add(&prod(&f(p, 2 * k - 1), &fd(p, 2 * j - 1))?)?;
    Ok((x1, x2))
}

fn slp_witt(p: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    let (mut l, mut e) = (Vec::new(), Vec::new());
    for j in 1..p {
        push(&mut l, &mut e, format!("H{j}^sl"), h_sl(p, j)?);
    }
    for j in 1..=p {
        for k in j + 1..=p {
            let (x1, x2) = sl_pair(p, j, k)?;
            push(&mut l, &mut e, format!("f†{}f{}+f{}f†{}", 2 * j, 2 * k, 2 * j - 1, 2 * k - 1), x1);
            push(&mut l, &mut e, format!("f†{}f{}+f{}f†{}", 2 * k, 2 * j, 2 * k - 1, 2 * j - 1), x2);
        }
    }
    Ok((l, e))
}

fn spin_q_e(p: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    let dim = 4 * p;
    let (mut l, mut e) = (Vec::new(), Vec::new());
    let idx = |j: usize| (4 * j - 3, 4 * j - 2, 4 * j - 1, 4 * j);
    for j in 1..=p {
        let (a, b, c, d) = idx(j);
        push(&mut l, &mut e, format!("e{a}e{b}-e{c}e{d}"), e_form(dim, &[(1, a, b), (-1, c, d)])?);
    }
    for j in 1..=p {
        let (a, b, c, d) = idx(j);
        push(&mut l, &mut e, format!("e{a}e{c}+e{b}e{d}"), e_form(dim, &[(1, a, c), (1, b, d)])?);
    }
    for j in 1..=p {
        let (a, b, c, d) = idx(j);
        push(&mut l, &mut e, format!("e{a}e{d}-e{b}e{c}"), e_form(dim, &[(1, a, d), (-1, b, c)])?);
    }
    type Pattern = [(i64, u8, u8); 4];
    let patterns: [Pattern; 4] = [
        [(1, 0, 0), (1, 1, 1), (1, 2, 2), (1, 3, 3)],
        [(1, 0, 1), (-1, 1, 0), (-1, 2, 3), (1, 3, 2)],
        [(1, 0, 2), (1, 1, 3), (-1, 2, 0), (-1, 3, 1)],
        [(1, 0, 3), (-1, 1, 2), (1, 2, 1), (-1, 3, 0)],
    ];
    for pat in patterns.iter() {
        for j in 1..=p {
            for k in j + 1..=p {
                let terms: Vec<(i64, usize, usize)> =
                    pat.iter().map(|&(c, x, y)| (c, 4 * j - 3 + x as usize, 4 * k - 3 + y as usize)).collect();
                let label = terms
                    .iter()
                    .enumerate()
                    .map(|(t, &(c, x, y))| format!("{}e{x}e{y}", if c < 0 { "-" } else if t > 0 { "+" } else { "" }))
                    .collect::<String>();
                push(&mut l, &mut e, label, e_form(dim, &terms)?);
            }
        }
    }
    Ok((l, e))
}

pub fn algebra_basis(p: usize, algebra: AlgebraTag) -> Result<BivectorBasis> {
    let form = match algebra {
        AlgebraTag::SpinI | AlgebraTag::SpinQ | AlgebraTag::Sl2p => BasisForm::E,
        AlgebraTag::Sp2p | AlgebraTag::SlpInside => BasisForm::Witt,
    };
    algebra_basis_in(p, algebra, form)
}

/// The basis in a chosen form. The e-form of sp_2p is the spin_Q list; sl_p and spin_𝕀
/// only have one form.
pub fn algebra_basis_in(p: usize, algebra: AlgebraTag, form: BasisForm) -> Result<BivectorBasis> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let (labels, elements) = match (algebra, form) {
        (AlgebraTag::SpinI, BasisForm::E) => spin_i_e(p)?,
        (AlgebraTag::SpinQ, BasisForm::E) | (AlgebraTag::Sp2p, BasisForm::E) => spin_q_e(p)?,
        (AlgebraTag::Sl2p, BasisForm::E) => sl2p_e(p)?,
        (AlgebraTag::Sl2p, BasisForm::Witt) => sl2p_witt(p)?,
        (AlgebraTag::Sp2p, BasisForm::Witt) => sp2p_witt(p)?,
        (AlgebraTag::SlpInside, BasisForm::Witt) => slp_witt(p)?,
        _ => return Err(Error::InvalidArgument(format!("{algebra} has no {form:?}-form basis"))),
    };
    let basis = BivectorBasis { algebra, form, p, labels, elements, expected_real_dim: algebra.real_dim(p) };
    if basis.elements.iter().any(|x| !x.is_zero() && !x.is_homogeneous(2)) {
        return Err(Error::InvalidArgument(format!("{algebra} basis element is not a bivector")));
    }
    Ok(basis)
}

pub fn bracket(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    x.commutator(y)
}

/// Coordinates of a bivector on `e_i e_j`, `i < j`, in lex order.
pub fn bivector_coords(b: &Multivector) -> Result<Vec<FieldElement>> {
    if !b.is_zero() && !b.is_homogeneous(2) {
        return Err(Error::InvalidArgument("not a bivector".into()));
    }
    let n = b.dim();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            let (mask, _): (Blade, i32) = blade_from_indices(&[i, j])?;
            out.push(b.coeff(mask));
        }
    }
    Ok(out)
}

pub fn bivector_span(elements: &[Multivector]) -> Result<SpanSolver> {
    let dim = elements.first().map_or(0, |x| x.dim());
    let rows: Vec<Vec<FieldElement>> = elements.iter().map(bivector_coords).collect::<Result<_>>()?;
    SpanSolver::new(&rows, dim * dim.saturating_sub(1) / 2)
}

pub fn is_linearly_independent(basis: &BivectorBasis) -> bool {
    multivector_rank(&basis.elements) == basis.len()
}

/// Every bracket of two basis elements lies in the span of the basis.
pub fn closure_check(basis: &BivectorBasis) -> Result<bool> {
    let span = bivector_span(&basis.elements)?;
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let results: Vec<Result<bool>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let c = bracket(&basis.elements[a], &basis.elements[b])?;
            if c.is_zero() {
                return Ok(true);
            }
            span.contains(&bivector_coords(&c)?)
        })
        .collect();
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionEntry {
    pub label: String,
    pub witt: Multivector,
    pub e_form: Multivector,
    pub equal: bool,
}

/// `-¼ (Σ real terms + i Σ imaginary terms)`.
fn quarter_form(real: &[(i64, usize, usize)], imag: &[(i64, usize, usize)]) -> Result<Multivector> {
    let re = e_form(8, real)?;
    let im = e_form(8, imag)?.scale(&FieldElement::i());
    Ok(re.try_add(&im)?.scale(&FieldElement::from_ratio(-1, 4)))
}

/// The ten Witt-form / e-form identities for sp_4.
pub fn conversion_check() -> Result<Vec<ConversionEntry>> {
    let p = 2;
    let fdf = |a: usize, b: usize| prod(&fd(p, a), &f(p, b));
    let ffd = |a: usize, b: usize| prod(&f(p, a), &fd(p, b));
    let half_i = FieldElement::i().scale(&Rational::new(1.into(), 2.into()));
    let mut rows: Vec<(String, Multivector, Multivector)> = vec![
        ("H1^sympl".into(), h_sympl(p, 1)?, e_form(8, &[(1, 1, 2), (-1, 3, 4)])?.scale(&half_i)),
        ("H2^sympl".into(), h_sympl(p, 2)?, e_form(8, &[(1, 5, 6), (-1, 7, 8)])?.scale(&half_i)),
        ("f†1f2".into(), fdf(1, 2)?, quarter_form(&[(1, 1, 3), (1, 2, 4)], &[(-1, 1, 4), (1, 2, 3)])?),
        ("f†2f1".into(), fdf(2, 1)?, quarter_form(&[(-1, 1, 3), (-1, 2, 4)], &[(-1, 1, 4), (1, 2, 3)])?),
        ("f†3f4".into(), fdf(3, 4)?, quarter_form(&[(1, 5, 7), (1, 6, 8)], &[(-1, 5, 8), (1, 6, 7)])?),
        ("f†4f3".into(), fdf(4, 3)?, quarter_form(&[(-1, 5, 7), (-1, 6, 8)], &[(-1, 5, 8), (1, 6, 7)])?),
    ];
    let im_a = [(-1, 3, 8), (1, 4, 7), (1, 1, 6), (-1, 2, 5)];
    let im_b = [(-1, 4, 5), (1, 3, 6), (1, 1, 8), (-1, 2, 7)];
    rows.push((
        "f†2f4+f1f†3".into(),
        fdf(2, 4)?.try_add(&ffd(1, 3)?)?,
        quarter_form(&[(1, 3, 7), (1, 4, 8), (1, 1, 5), (1, 2, 6)], &im_a)?,
    ));
    rows.push((
        "f†4f2+f3f†1".into(),
        fdf(4, 2)?.try_add(&ffd(3, 1)?)?,
        quarter_form(&[(-1, 3, 7), (-1, 4, 8), (-1, 1, 5), (-1, 2, 6)], &im_a)?,
    ));
    rows.push((
        "f2f†3-f†1f4".into(),
        ffd(2, 3)?.try_sub(&fdf(1, 4)?)?,
        quarter_form(&[(1, 3, 5), (1, 4, 6), (-1, 1, 7), (-1, 2, 8)], &im_b)?,
    ));
    rows.push((
        "f3f†2-f†4f1".into(),
        ffd(3, 2)?.try_sub(&fdf(4, 1)?)?,
        quarter_form(&[(-1, 3, 5), (-1, 4, 6), (1, 1, 7), (1, 2, 8)], &im_b)?,
    ));
    Ok(rows
        .into_iter()
        .map(|(label, witt, e_form)| {
            let equal = witt == e_form;
            ConversionEntry { label, witt, e_form, equal }
        })
        .collect())
}

/// The ordered Cartan elements of the complex algebras.
pub fn cartan(p: usize, algebra: AlgebraTag) -> Result<Vec<Multivector>> {
    match algebra {
        AlgebraTag::Sl2p => (1..2 * p).map(|j| h_sl2p(p, j)).collect(),
        AlgebraTag::Sp2p => (1..=p).map(|j| h_sympl(p, j)).collect(),
        AlgebraTag::SlpInside => (1..p).map(|j| h_sl(p, j)).collect(),
        _ => Err(Error::InvalidArgument(format!("no Cartan subalgebra listed for {algebra}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub entries: Vec<Rational>,
}

impl WeightVector {
    pub fn from_ints(v: &[i64]) -> Self {
        WeightVector { entries: v.iter().map(|&x| Rational::from_integer(x.into())).collect() }
    }

    pub fn add(&self, o: &WeightVector) -> Result<WeightVector> {
        if self.entries.len() != o.entries.len() {
            return Err(Error::DimensionMismatch { left: self.entries.len(), right: o.entries.len() });
        }
        Ok(WeightVector { entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect() })
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Eigenvalue of left multiplication by `h` on `v`.
pub fn eigenvalue(h: &Multivector, v: &Multivector) -> Result<FieldElement> {
    let (mask, c) = v.terms().next().ok_or_else(|| Error::InvalidArgument("zero vector has no weight".into()))?;
    let hv = h.product(v)?;
    let lambda = hv.coeff(mask).div(c)?;
    if hv != v.scale(&lambda) {
        return Err(Error::NotEigenvector("not a simultaneous eigenvector of the Cartan elements".into()));
    }
    Ok(lambda)
}

pub fn weight_of(cartan: &[Multivector], v: &Multivector) -> Result<WeightVector> {
    let entries = cartan
        .iter()
        .map(|h| {
            eigenvalue(h, v)?
                .to_rational()
                .ok_or_else(|| Error::NotEigenvector("eigenvalue is not rational".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightVector { entries })
}

pub fn weight_for(p: usize, algebra: AlgebraTag, v: &Multivector) -> Result<WeightVector> {
    weight_of(&cartan(p, algebra)?, v)
}

/// `dim = (2/r!) (2p+1)!/(2p+2-r)! (p-r+1)` for the sp_2p module with highest weight `(1^r, 0^{p-r})`.
pub fn weyl_dim_sp(p: usize, r: usize) -> Result<usize> {
    if r > p {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds p = {p}")));
    }
    let mut x = Rational::from_integer(2.into()) * Rational::from_integer(((p - r + 1) as i64).into());
    for k in 1..=r {
        x /= Rational::from_integer((k as i64).into());
    }
    // (2p+1)!/(2p+2-r)!: a product for r >= 2, 1/(2p+2) for r = 0
    let (top, bottom) = (2 * p + 1, 2 * p + 2 - r);
    if bottom <= top {
        for k in bottom + 1..=top {
            x *= Rational::from_integer((k as i64).into());
        }
    } else {
        for k in top + 1..=bottom {
            x /= Rational::from_integer((k as i64).into());
        }
    }
    if !x.is_integer() || x < Rational::zero() {
        return Err(Error::InvalidArgument(format!("non-integral dimension {x}")));
    }
    Ok(x.to_integer().try_into().map_err(|_| Error::InvalidArgument("dimension overflow".into()))?)
}

/// `f†_{j_1} ⋯ f†_{j_n} I` as an honest Clifford product.
pub fn witt_product_spinor(p: usize, indices: &[usize]) -> Result<Multivector> {
    let mut out = Multivector::one(4 * p);
    for &j in indices {
        out = out.product(&fd(p, j))?;
    }
    out.product(&primitive_idempotent(p)?)
}

/// Indices of `f†_{2p} f†_{2p-2} ⋯ f†_{2a+2} f†_1 f†_3 ⋯ f†_{2(p-b)-1}`.
pub fn highest_weight_indices(p: usize, a: usize, b: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (a + 1..=p).rev().map(|j| 2 * j).collect();
    v.extend((1..=p.saturating_sub(b)).map(|j| 2 * j - 1));
    v
}

/// The sl_p weight pattern listed for `α`, in its three cases.
pub fn listed_sl_pattern(p: usize, a: usize, b: usize) -> WeightVector {
    let w: Vec<i64> = (1..p)
        .map(|j| {
            let (lo, hi) = (a.min(p - b), a.max(p - b));
            if j <= lo {
                2
            } else if j <= hi {
                1
            } else {
                0
            }
        })
        .collect();
    WeightVector::from_ints(&w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeightReport {
    pub a: usize,
    pub b: usize,
    pub in_degree: bool,
    pub q_annihilates: bool,
    pub in_cell: bool,
    pub weight: WeightVector,
    pub component_sum: WeightVector,
    /// `None` when `b = 0`, where the listed pattern does not apply.
    pub listed_pattern: Option<WeightVector>,
    /// sp weight of the `b = 0` vector, expected `(1^a, 0^{p-a})`.
    pub sp_weight: Option<WeightVector>,
}

impl HighestWeightReport {
    pub fn ok(&self) -> bool {
        let listed = self.listed_pattern.as_ref().map_or(true, |w| *w == self.weight);
        let sp = self.sp_weight.as_ref().map_or(true, |w| {
            let p = w.entries.len();
            *w == WeightVector::from_ints(&(0..p).map(|j| i64::from(j < self.a)).collect::<Vec<_>>())
        });
        self.in_degree && self.q_annihilates && self.in_cell && self.weight == self.component_sum && listed && sp
    }
}

pub fn highest_weight_cell_check(p: usize, r: usize) -> Result<Vec<HighestWeightReport>> {
    if r > p {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds p = {p}")));
    }
    let q = op_q(p)?;
    let cell = cell_basis(p, CellLabel::new(2 * p - r, r))?;
    let sl = cartan(p, AlgebraTag::SlpInside)?;
    let mut out = Vec::new();
    for a in 0..=r {
        let b = r - a;
        let alpha = witt_product_spinor(p, &highest_weight_indices(p, a, b))?;
        let degrees = crate::witt::spinor_degrees(p, &alpha)?;
        let in_degree = degrees == vec![2 * p - r];
        let q_annihilates = q.apply(&alpha)?.is_zero();
        let in_cell = cell.contains(&alpha)?;
        let weight = weight_of(&sl, &alpha)?;
        let wa = weight_of(&sl, &witt_product_spinor(p, &highest_weight_indices(p, a, p))?)?;
        let wb = weight_of(&sl, &witt_product_spinor(p, &highest_weight_indices(p, p, b))?)?;
        let component_sum = wa.add(&wb)?;
        let listed_pattern = (b > 0).then(|| listed_sl_pattern(p, a, b));
        let sp_weight = if b == 0 { Some(weight_for(p, AlgebraTag::Sp2p, &alpha)?) } else { None };
        out.push(HighestWeightReport { a, b, in_degree, q_annihilates, in_cell, weight, component_sum, listed_pattern, sp_weight });
    }
    Ok(out)
}

/// Every sp_2p basis element maps the cell into itself.
pub fn cell_invariance(p: usize, label: CellLabel) -> Result<bool> {
    let cell = cell_basis(p, label)?;
    let basis = algebra_basis(p, AlgebraTag::Sp2p)?;
    let results: Vec<Result<bool>> = basis
        .elements
        .par_iter()
        .map(|h| {
            let op = LinearOperator::left_mult(p, h.clone(), 0)?;
            let m = op.matrix_on(label.r)?;
            for v in cell.basis_coords() {
                if !cell.contains_vector(&m.apply(v)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complex matrix of a bivector commuting with 𝕀, extended complex-linearly from
/// `b ↦ φ⁻¹(M(b))` on real bivectors.
pub fn bivector_complex_matrix(b: &Multivector) -> Result<Matrix> {
    let re = Multivector::from_terms(b.dim(), b.terms().map(|(m, c)| (m, c.re())))?;
    let im = Multivector::from_terms(b.dim(), b.terms().map(|(m, c)| (m, c.im())))?;
    let n = b.dim();
    let zero = || Matrix::zeros(n, n);
    let mre = if re.is_zero() { zero() } else { bivector_to_skew(&re)? };
    let mim = if im.is_zero() { zero() } else { bivector_to_skew(&im)? };
    phi_inverse(&mre)?.add(&phi_inverse(&mim)?.scale(&FieldElement::i()))
}

/// The standard symplectic form: `p` blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(p: usize) -> Matrix {
    let mut m = Matrix::zeros(2 * p, 2 * p);
    for j in 0..p {
        m.set(2 * j, 2 * j + 1, FieldElement::one());
        m.set(2 * j + 1, 2 * j, FieldElement::from_int(-1));
    }
    m
}

/// `Aᵀ Ω + Ω A = 0`.
pub fn is_sp_matrix(a: &Matrix) -> Result<bool> {
    if !a.is_square() || a.rows() % 2 != 0 {
        return Err(Error::InvalidArgument("sp test needs an even square matrix".into()));
    }
    let omega = symplectic_form(a.rows() / 2);
    Ok(a.transpose().mul(&omega)?.add(&omega.mul(a)?)?.is_zero())
}

pub fn trace(a: &Matrix) -> FieldElement {
    (0..a.rows().min(a.cols())).fold(FieldElement::zero(), |acc, k| &acc + a.get(k, k))
}

/// Real dimensions in the overview diagram: the bivector spaces of ℂ_p, ℂ_2p, ℂ_4p and
/// the algebras sl_p, sl_2p, sp_p (p even), sp_2p.
pub fn dimension_ledger(p: usize) -> Vec<(String, usize)> {
    let mut v = vec![
        ("C_p^(2)".to_string(), p * p.saturating_sub(1)),
        ("C_2p^(2)".to_string(), 2 * p * (2 * p - 1)),
        ("C_4p^(2)".to_string(), 4 * p * (4 * p - 1)),
        ("sl_p".to_string(), 2 * (p * p - 1)),
        ("sl_2p".to_string(), AlgebraTag::Sl2p.real_dim(p)),
        ("sp_2p".to_string(), AlgebraTag::Sp2p.real_dim(p)),
    ];
    if p % 2 == 0 {
        v.push(("sp_p".to_string(), p * (p + 1)));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for p in 1..=3 {
            for tag in [AlgebraTag::SpinI, AlgebraTag::SpinQ, AlgebraTag::Sl2p, AlgebraTag::Sp2p, AlgebraTag::SlpInside] {
                assert_eq!(algebra_basis(p, tag).unwrap().len(), tag.basis_len(p), "{tag} p={p}");
            }
        }
    }

    #[test]
    fn weyl_small() {
        assert_eq!(weyl_dim_sp(3, 3).unwrap(), 14);
        assert_eq!(weyl_dim_sp(2, 2).unwrap(), 5);
        assert_eq!(weyl_dim_sp(4, 0).unwrap(), 1);
        assert!(weyl_dim_sp(2, 3).is_err());
    }
}
