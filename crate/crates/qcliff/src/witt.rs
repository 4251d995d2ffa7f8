//! Witt basis, the primitive idempotent and the spinor space `C_{4p} I`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanSolver};
use crate::scalar::{rat, FieldElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WittIndex {
    pub j: usize,
    pub dagger: bool,
}

impl WittIndex {
    pub fn f(j: usize) -> Self {
        WittIndex { j, dagger: false }
    }

    pub fn fd(j: usize) -> Self {
        WittIndex { j, dagger: true }
    }
}

impl fmt::Display for WittIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "f†{}", self.j)
        } else {
            write!(f, "f{}", self.j)
        }
    }
}

pub fn algebra_dim(p: usize) -> usize {
    4 * p
}

pub fn check_p(p: usize) -> Result<()> {
    if p == 0 || p > 8 {
        return Err(Error::InvalidArgument(format!("p = {p} outside 1..=8")));
    }
    Ok(())
}

/// `f†_k = ½(e_{2k-1} + i e_{2k})`, `f_k = -½(e_{2k-1} - i e_{2k})`.
pub fn witt_vector(idx: WittIndex, p: usize) -> Result<Multivector> {
    check_p(p)?;
    if idx.j == 0 || idx.j > 2 * p {
        return Err(Error::IndexOutOfRange(format!("Witt index {} for p = {p}", idx.j)));
    }
    let m = algebra_dim(p);
    let half = FieldElement::from_ratio(1, 2);
    let half_i = FieldElement::complex(rat(0, 1), rat(1, 2));
    let odd = 1 << (2 * idx.j - 2);
    let even = 1 << (2 * idx.j - 1);
    let terms = if idx.dagger { vec![(odd, half), (even, half_i)] } else { vec![(odd, -half), (even, half_i)] };
    Multivector::from_terms(m, terms)
}

pub fn f(p: usize, j: usize) -> Multivector {
    witt_vector(WittIndex::f(j), p).expect("Witt index in range")
}

pub fn fd(p: usize, j: usize) -> Multivector {
    witt_vector(WittIndex::fd(j), p).expect("Witt index in range")
}

/// `I_j = f_j f†_j`.
pub fn idempotent(p: usize, j: usize) -> Multivector {
    &f(p, j) * &fd(p, j)
}

/// `I = I_1 I_2 ... I_{2p}`.
pub fn primitive_idempotent(p: usize) -> Result<Multivector> {
    check_p(p)?;
    let mut out = Multivector::one(algebra_dim(p));
    for j in 1..=2 * p {
        out = &out * &idempotent(p, j);
    }
    Ok(out)
}

/// r-subsets of {1..n} as bitmasks (bit k-1 for index k) in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
        if cur.len() == r {
            out.push(cur.iter().fold(0u32, |m, &k| m | (1 << (k - 1))));
            return;
        }
        for k in start..=n {
            if n - k + 1 < r - cur.len() {
                break;
            }
            cur.push(k);
            rec(k + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        rec(1, n, r, &mut Vec::new(), &mut out);
    }
    out
}

pub fn subset_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask & (1 << k) != 0).map(|k| k + 1).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `f†_{a1} ... f†_{ar} I` for the sorted subset `A`, as an honest product.
pub fn spinor_monomial(p: usize, set: u32) -> Result<Multivector> {
    check_p(p)?;
    if set >> (2 * p) != 0 {
        return Err(Error::IndexOutOfRange(format!("subset {:?} for p = {p}", subset_indices(set))));
    }
    let mut out = Multivector::one(algebra_dim(p));
    for k in subset_indices(set) {
        out = &out * &fd(p, k);
    }
    Ok(&out * &primitive_idempotent(p)?)
}

/// Witt-word label such as `f†1 f†3 I`.
pub fn monomial_label(set: u32) -> String {
    let mut parts: Vec<String> = subset_indices(set).iter().map(|k| format!("f†{k}")).collect();
    parts.push("I".into());
    parts.join(" ")
}

/// Coefficient of blade `mask` inside `f†_A I` for the subset `A` it determines.
///
/// In plane k the factor is `f†_k` (terms ½e_{2k-1}, ½i e_{2k}) when k is in A
/// and `I_k` (terms ½, -½i e_{2k-1}e_{2k}) otherwise; the planes are disjoint and
/// already in increasing order, so no reordering sign appears.
fn monomial_blade_weight(p: usize, mask: Blade) -> (u32, FieldElement) {
    let mut set = 0u32;
    let mut w = FieldElement::one();
    let half = FieldElement::from_ratio(1, 2);
    let half_i = FieldElement::complex(rat(0, 1), rat(1, 2));
    for k in 0..2 * p {
        let odd = mask & (1 << (2 * k)) != 0;
        let even = mask & (1 << (2 * k + 1)) != 0;
        let factor = match (odd, even) {
            (false, false) => half.clone(),
            (true, false) => {
                set |= 1 << k;
                half.clone()
            }
            (false, true) => {
                set |= 1 << k;
                half_i.clone()
            }
            (true, true) => -&half_i,
        };
        w = &w * &factor;
    }
    (set, w)
}

fn canonical_blade(set: u32) -> Blade {
    let mut b = 0;
    for k in subset_indices(set) {
        b |= 1 << (2 * k - 2);
    }
    b
}

/// Decomposes an element of the spinor space into monomial coefficients,
/// `x = Σ_A c_A f†_A I`. Fails when `x` is not in the left ideal.
pub fn spinor_decompose(p: usize, x: &Multivector) -> Result<BTreeMap<u32, FieldElement>> {
    check_p(p)?;
    if x.dim() != algebra_dim(p) {
        return Err(Error::DimensionMismatch { left: algebra_dim(p), right: x.dim() });
    }
    let full = 1usize << (2 * p);
    let mut coeffs: BTreeMap<u32, FieldElement> = BTreeMap::new();
    let mut counts: HashMap<u32, usize> = HashMap::new();
    // first pass: read the coefficients off the canonical blades
    for (mask, c) in x.terms() {
        let (set, w) = monomial_blade_weight(p, mask);
        if mask == canonical_blade(set) {
            coeffs.insert(set, c.div(&w)?);
        }
    }
    for (mask, c) in x.terms() {
        let (set, w) = monomial_blade_weight(p, mask);
        let Some(cs) = coeffs.get(&set) else {
            return Err(Error::NotInSpan("element is not in the spinor space".into()));
        };
        if &(cs * &w) != c {
            return Err(Error::NotInSpan("element is not in the spinor space".into()));
        }
        *counts.entry(set).or_default() += 1;
    }
    if counts.values().any(|&n| n != full) {
        return Err(Error::NotInSpan("element is not in the spinor space".into()));
    }
    Ok(coeffs)
}

/// Inverse of [`spinor_decompose`], built blade by blade.
pub fn spinor_compose(p: usize, coeffs: &BTreeMap<u32, FieldElement>) -> Result<Multivector> {
    check_p(p)?;
    let m = algebra_dim(p);
    let mut terms = Vec::new();
    for (&set, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        // enumerate the 2^{2p} blades of f†_A I
        for choice in 0u32..(1 << (2 * p)) {
            let mut mask: Blade = 0;
            for k in 0..2 * p {
                let second = choice & (1 << k) != 0;
                let in_set = set & (1 << k) != 0;
                mask |= match (in_set, second) {
                    (true, false) => 1 << (2 * k),
                    (true, true) => 1 << (2 * k + 1),
                    (false, false) => 0,
                    (false, true) => 3 << (2 * k),
                };
            }
            let (_, w) = monomial_blade_weight(p, mask);
            terms.push((mask, c * &w));
        }
    }
    Multivector::from_terms(m, terms)
}

/// Which homogeneous degrees occur in a spinor.
pub fn spinor_degrees(p: usize, x: &Multivector) -> Result<Vec<usize>> {
    let mut d: Vec<usize> = spinor_decompose(p, x)?.keys().map(|s| s.count_ones() as usize).collect();
    d.sort_unstable();
    d.dedup();
    Ok(d)
}

/// Degree-r part of a spinor.
pub fn spinor_homogeneous_part(p: usize, x: &Multivector, r: usize) -> Result<Multivector> {
    let c: BTreeMap<u32, FieldElement> =
        spinor_decompose(p, x)?.into_iter().filter(|(s, _)| s.count_ones() as usize == r).collect();
    spinor_compose(p, &c)
}

/// Ordered monomial coordinates on `S^r`.
#[derive(Clone, Debug)]
pub struct MonomialChart {
    pub p: usize,
    pub r: usize,
    pub sets: Vec<u32>,
    index: HashMap<u32, usize>,
}

impl MonomialChart {
    pub fn new(p: usize, r: usize) -> Result<Self> {
        check_p(p)?;
        if r > 2 * p {
            return Err(Error::InvalidArgument(format!("degree {r} exceeds 2p = {}", 2 * p)));
        }
        let sets = subsets(2 * p, r);
        let index = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Ok(MonomialChart { p, r, sets, index })
    }

    pub fn dim(&self) -> usize {
        self.sets.len()
    }

    pub fn position(&self, set: u32) -> Option<usize> {
        self.index.get(&set).copied()
    }

    /// Coordinates of a spinor of pure degree r.
    pub fn coords(&self, x: &Multivector) -> Result<Vec<FieldElement>> {
        let mut v = vec![FieldElement::zero(); self.dim()];
        for (set, c) in spinor_decompose(self.p, x)? {
            let Some(i) = self.position(set) else {
                return Err(Error::NotInSpan(format!("spinor has components outside degree {}", self.r)));
            };
            v[i] = c;
        }
        Ok(v)
    }

    pub fn element(&self, v: &[FieldElement]) -> Result<Multivector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: v.len() });
        }
        let c = self.sets.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(s, c)| (*s, c.clone())).collect();
        spinor_compose(self.p, &c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceLabel {
    Homogeneous { r: usize },
    Cell { r: usize, s: usize },
}

impl SubspaceLabel {
    pub fn degree(&self) -> usize {
        match *self {
            SubspaceLabel::Homogeneous { r } | SubspaceLabel::Cell { r, .. } => r,
        }
    }
}

impl fmt::Display for SubspaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceLabel::Homogeneous { r } => write!(f, "S^{r}"),
            SubspaceLabel::Cell { r, s } => write!(f, "S_{s}^{r}"),
        }
    }
}

/// A subspace of `S^r` with an exact basis and a coordinate solver.
#[derive(Clone, Debug)]
pub struct SpinorSubspace {
    pub p: usize,
    pub label: SubspaceLabel,
    pub basis: Vec<Multivector>,
    chart: MonomialChart,
    basis_coords: Vec<Vec<FieldElement>>,
    solver: SpanSolver,
}

impl SpinorSubspace {
    /// Builds the subspace from basis vectors given in monomial coordinates of `S^r`.
    pub fn from_coords(p: usize, label: SubspaceLabel, basis_coords: Vec<Vec<FieldElement>>) -> Result<Self> {
        let chart = MonomialChart::new(p, label.degree())?;
        let solver = SpanSolver::new(&basis_coords, chart.dim())?;
        if !solver.independent() {
            return Err(Error::InvalidArgument(format!("basis of {label} is linearly dependent")));
        }
        let basis = basis_coords.iter().map(|v| chart.element(v)).collect::<Result<Vec<_>>>()?;
        Ok(SpinorSubspace { p, label, basis, chart, basis_coords, solver })
    }

    /// Builds the subspace from spinor multivectors of pure degree r.
    pub fn from_multivectors(p: usize, label: SubspaceLabel, basis: Vec<Multivector>) -> Result<Self> {
        let chart = MonomialChart::new(p, label.degree())?;
        let coords = basis.iter().map(|b| chart.coords(b)).collect::<Result<Vec<_>>>()?;
        let solver = SpanSolver::new(&coords, chart.dim())?;
        if !solver.independent() {
            return Err(Error::InvalidArgument(format!("basis of {label} is linearly dependent")));
        }
        Ok(SpinorSubspace { p, label, basis, chart, basis_coords: coords, solver })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.label.degree()
    }

    pub fn chart(&self) -> &MonomialChart {
        &self.chart
    }

    /// Basis vectors in monomial coordinates of `S^r`.
    pub fn basis_coords(&self) -> &[Vec<FieldElement>] {
        &self.basis_coords
    }

    pub fn coordinates(&self, x: &Multivector) -> Result<Vec<FieldElement>> {
        let v = self.chart.coords(x)?;
        self.coordinates_of_monomial_vector(&v)
    }

    pub fn coordinates_of_monomial_vector(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.solver.solve(v)?.ok_or_else(|| Error::NotInSpan(format!("vector is not in {}", self.label)))
    }

    pub fn contains(&self, x: &Multivector) -> Result<bool> {
        match self.chart.coords(x) {
            Ok(v) => self.solver.contains(&v),
            Err(Error::NotInSpan(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn contains_vector(&self, v: &[FieldElement]) -> Result<bool> {
        self.solver.contains(v)
    }

    /// Basis matrix with one row per basis vector.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.basis_coords.clone()).unwrap_or_else(|_| Matrix::zeros(0, self.chart.dim()))
    }
}

/// Canonical basis `{f†_A I : |A| = r}` of `S^r` with independence checked by exact rank.
pub fn spinor_basis(p: usize, r: usize) -> Result<SpinorSubspace> {
    check_p(p)?;
    if r > 2 * p {
        return Err(Error::InvalidArgument(format!("degree {r} exceeds 2p = {}", 2 * p)));
    }
    let basis = subsets(2 * p, r).into_iter().map(|s| spinor_monomial(p, s)).collect::<Result<Vec<_>>>()?;
    if multivector_rank(&basis) != basis.len() {
        return Err(Error::InvalidArgument(format!("spinor monomials of degree {r} are dependent")));
    }
    SpinorSubspace::from_multivectors(p, SubspaceLabel::Homogeneous { r }, basis)
}

/// Exact rank of a family of multivectors in blade coordinates, by sparse elimination.
pub fn multivector_rank(xs: &[Multivector]) -> usize {
    let mut pivots: BTreeMap<Blade, BTreeMap<Blade, FieldElement>> = BTreeMap::new();
    let mut rank = 0;
    for x in xs {
        let mut row: BTreeMap<Blade, FieldElement> = x.terms().map(|(m, c)| (m, c.clone())).collect();
        loop {
            let Some((&lead, lc)) = row.iter().next() else { break };
            let Some(prow) = pivots.get(&lead) else {
                let inv = lc.inv().expect("nonzero lead");
                let normalized = row.iter().map(|(m, c)| (*m, c * &inv)).collect();
                pivots.insert(lead, normalized);
                rank += 1;
                break;
            };
            let f = lc.clone();
            for (m, c) in prow {
                let e = row.entry(*m).or_default();
                *e -= &(&f * c);
                if e.is_zero() {
                    row.remove(m);
                }
            }
        }
    }
    rank
}

/// Random element of `S^r` with small Gaussian-integer coordinates.
pub fn random_spinor<R: rand::Rng + ?Sized>(p: usize, r: usize, rng: &mut R) -> Result<Multivector> {
    let chart = MonomialChart::new(p, r)?;
    let v: Vec<FieldElement> = (0..chart.dim()).map(|_| random_small(rng)).collect();
    chart.element(&v)
}

/// Small Gaussian integer `a + bi` with `|a|, |b| <= 3`.
pub fn random_small<R: rand::Rng + ?Sized>(rng: &mut R) -> FieldElement {
    FieldElement::complex(rat(rng.gen_range(-3..=3), 1), rat(rng.gen_range(-3..=3), 1))
}
