//! Enumeration of contributing γ-monomials and the bigraded dimension table.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobian::{monomial_basis, restrict, MonomialBasis, MonomialOrder};
use crate::poly::InvertiblePolynomial;
use crate::symmetry::{GroupElement, SymmetryContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window {
    pub dmin: i64,
    pub dmax: i64,
}

impl Window {
    pub fn new(dmin: i64, dmax: i64) -> Result<Self> {
        if dmin > dmax {
            return Err(Error::InvalidWindow(dmin, dmax));
        }
        Ok(Window { dmin, dmax })
    }

    pub fn contains(&self, d: i64) -> bool {
        self.dmin <= d && d <= self.dmax
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.dmin..=self.dmax
    }

    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let (a, b) = (self.dmin.max(other.dmin), self.dmax.min(other.dmax));
        (a <= b).then_some(Window { dmin: a, dmax: b })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.dmin, self.dmax)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::A => "A",
            Kind::B => "B",
            Kind::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaMonomial {
    pub kind: Kind,
    /// Total exponents of `x0..x_{n+1}`; a dual marker counts as −1.
    pub b: Vec<i64>,
    /// Index into the Jacobian basis of the restriction to the fixed variables.
    pub jac_index: usize,
    /// Power of `x0` before the dual marker (kinds A and B).
    pub beta: Option<i64>,
}

impl GammaMonomial {
    /// Text such as `x0^6*x2^4` or `x0^3*x0^v*x1^v`, where `^v` marks a dual variable.
    pub fn pattern(&self) -> String {
        fn push(parts: &mut Vec<String>, j: usize, e: i64) {
            match e {
                0 => {}
                -1 => parts.push(format!("x{j}^v")),
                1 => parts.push(format!("x{j}")),
                e => parts.push(format!("x{j}^{e}")),
            }
        }
        let mut parts = Vec::new();
        match self.kind {
            Kind::B => {
                push(&mut parts, 0, self.beta.unwrap());
                parts.push("x0^v".to_string());
            }
            _ => push(&mut parts, 0, self.b[0]),
        }
        for (j, &e) in self.b.iter().enumerate().skip(1) {
            push(&mut parts, j, e);
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Contribution {
    pub degree: i64,
    pub weight: i64,
    pub gamma: GroupElement,
    pub monomial: GammaMonomial,
    pub u: i64,
}

impl Contribution {
    pub fn kind(&self) -> Kind {
        self.monomial.kind
    }
}

/// Dimensions of the bigraded pieces `HH^{d, q}` inside a degree window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedTable {
    window: Window,
    cells: BTreeMap<(i64, i64), u64>,
    /// Per degree: whether every contribution in that degree was enumerated.
    complete: BTreeMap<i64, bool>,
}

impl BigradedTable {
    pub fn new(window: Window) -> Self {
        BigradedTable { window, cells: BTreeMap::new(), complete: window.degrees().map(|d| (d, true)).collect() }
    }

    pub fn from_cells(window: Window, cells: impl IntoIterator<Item = ((i64, i64), u64)>) -> Result<Self> {
        let mut t = BigradedTable::new(window);
        for ((d, q), n) in cells {
            if !window.contains(d) {
                return Err(Error::Schema(format!("cell in degree {d} lies outside window {window}")));
            }
            t.add(d, q, n);
        }
        Ok(t)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    fn add(&mut self, d: i64, q: i64, n: u64) {
        if n > 0 {
            *self.cells.entry((d, q)).or_insert(0) += n;
        }
    }

    fn merge(mut self, other: BigradedTable) -> BigradedTable {
        for ((d, q), n) in other.cells {
            self.add(d, q, n);
        }
        self
    }

    pub fn cells(&self) -> &BTreeMap<(i64, i64), u64> {
        &self.cells
    }

    pub fn get(&self, d: i64, q: i64) -> u64 {
        self.cells.get(&(d, q)).copied().unwrap_or(0)
    }

    pub fn is_complete(&self, d: i64) -> bool {
        self.complete.get(&d).copied().unwrap_or(false)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `dim HH^d`.
    pub fn dim(&self, d: i64) -> u64 {
        self.cells.range((d, i64::MIN)..=(d, i64::MAX)).map(|(_, &n)| n).sum()
    }

    /// `(q, dim HH^{d,q})` pairs in increasing `q`.
    pub fn weights(&self, d: i64) -> Vec<(i64, u64)> {
        self.cells.range((d, i64::MIN)..=(d, i64::MAX)).map(|(&(_, q), &n)| (q, n)).collect()
    }

    /// Weights in degree `d`, each repeated by its multiplicity, sorted.
    pub fn weight_multiset(&self, d: i64) -> Vec<i64> {
        self.weights(d).into_iter().flat_map(|(q, n)| std::iter::repeat_n(q, n as usize)).collect()
    }

    pub fn restrict(&self, window: Window) -> Result<BigradedTable> {
        if window.dmin < self.window.dmin || window.dmax > self.window.dmax {
            return Err(Error::InvalidWindow(window.dmin, window.dmax));
        }
        let cells = self.cells.iter().filter(|((d, _), _)| window.contains(*d)).map(|(&k, &v)| (k, v));
        BigradedTable::from_cells(window, cells)
    }
}

/// Engine knobs: Jacobian monomial order and whether to fan out over `ker χ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub order: MonomialOrder,
    pub parallel: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { order: MonomialOrder::Grevlex, parallel: true }
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_floor(&a, &b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Contributions of one group element within `window`, given its Jacobian basis.
pub fn contributions_for(
    ctx: &SymmetryContext,
    gamma: &GroupElement,
    basis: &MonomialBasis,
    window: Window,
) -> Result<Vec<Contribution>> {
    let nvars = ctx.poly().nvars();
    let n = ctx.poly().n();
    let k = gamma.k() as i64;
    let fixed = gamma.fixed_vars();
    let mut out = Vec::new();
    for idx in 0..basis.dimension() {
        let exps = basis.full_exponents(idx, nvars);
        let rest: Vec<i64> = (0..nvars).map(|j| if fixed[j] { exps[j] as i64 } else { -1 }).collect();
        if !gamma.fixes_x0() {
            let mut b = vec![-1];
            b.extend(&rest);
            if let Some(u) = ctx.chi_power(&b) {
                let degree = 2 * u + n - k + 2;
                if window.contains(degree) {
                    let monomial = GammaMonomial { kind: Kind::C, b, jac_index: idx, beta: None };
                    out.push(Contribution { degree, weight: -1, gamma: gamma.clone(), monomial, u });
                }
            }
            continue;
        }
        let Some(fam) = ctx.solve_family(&rest) else { continue };
        for (kind, lower, shift) in [(Kind::A, 0, n - k + 1), (Kind::B, -1, n - k + 2)] {
            // b0 = fam.b0 + t·db0 ≥ lower, degree = 2(fam.u + t·du) + shift ∈ window
            let tmin_b0 = div_ceil(lower - fam.b0, fam.db0);
            let base = 2 * fam.u + shift;
            let (tlo, thi) = if fam.du == 0 {
                if window.contains(base) {
                    return Err(Error::NonterminatingFamily(base));
                }
                continue;
            } else if fam.du > 0 {
                (div_ceil(window.dmin - base, 2 * fam.du), div_floor(window.dmax - base, 2 * fam.du))
            } else {
                (div_ceil(window.dmax - base, 2 * fam.du), div_floor(window.dmin - base, 2 * fam.du))
            };
            for t in tlo.max(tmin_b0)..=thi {
                let b0 = fam.b0 + t * fam.db0;
                let u = fam.u + t * fam.du;
                let mut b = vec![b0];
                b.extend(&rest);
                let beta = if kind == Kind::A { b0 } else { b0 + 1 };
                let monomial = GammaMonomial { kind, b, jac_index: idx, beta: Some(beta) };
                out.push(Contribution { degree: 2 * u + shift, weight: b0, gamma: gamma.clone(), monomial, u });
            }
        }
    }
    Ok(out)
}

/// Jacobian bases for every fixed-variable mask that occurs in `ker χ`.
fn bases_for(
    poly: &InvertiblePolynomial,
    elements: &[GroupElement],
    order: MonomialOrder,
    parallel: bool,
) -> Result<HashMap<Vec<bool>, Arc<MonomialBasis>>> {
    let masks: BTreeSet<Vec<bool>> = elements.iter().map(GroupElement::fixed_vars).collect();
    let masks: Vec<Vec<bool>> = masks.into_iter().collect();
    let compute = |m: &Vec<bool>| monomial_basis(&restrict(poly, m), order).map(|b| (m.clone(), Arc::new(b)));
    if parallel {
        masks.par_iter().map(compute).collect()
    } else {
        masks.iter().map(compute).collect()
    }
}

fn all_contributions(p: &InvertiblePolynomial, window: Window, opts: EngineOptions) -> Result<Vec<Contribution>> {
    let ctx = SymmetryContext::build(p)?;
    let elements = ctx.ker_chi();
    let bases = bases_for(p, &elements, opts.order, opts.parallel)?;
    let per = |g: &GroupElement| contributions_for(&ctx, g, &bases[&g.fixed_vars()], window);
    let lists: Vec<Vec<Contribution>> = if opts.parallel {
        elements.par_iter().map(per).collect::<Result<_>>()?
    } else {
        elements.iter().map(per).collect::<Result<_>>()?
    };
    Ok(lists.into_iter().flatten().collect())
}

pub fn compute_table(p: &InvertiblePolynomial, window: Window) -> Result<BigradedTable> {
    compute_table_with(p, window, EngineOptions::default())
}

pub fn compute_table_with(p: &InvertiblePolynomial, window: Window, opts: EngineOptions) -> Result<BigradedTable> {
    let ctx = SymmetryContext::build(p)?;
    let elements = ctx.ker_chi();
    let bases = bases_for(p, &elements, opts.order, opts.parallel)?;
    let per = |g: &GroupElement| -> Result<BigradedTable> {
        let mut t = BigradedTable::new(window);
        for c in contributions_for(&ctx, g, &bases[&g.fixed_vars()], window)? {
            t.add(c.degree, c.weight, 1);
        }
        Ok(t)
    };
    if opts.parallel {
        elements
            .par_iter()
            .map(per)
            .try_reduce(|| BigradedTable::new(window), |a, b| Ok(a.merge(b)))
    } else {
        elements.iter().map(per).try_fold(BigradedTable::new(window), |a, b| Ok(a.merge(b?)))
    }
}

/// True iff `HH^2` vanishes.
pub fn hh2_vanishes(p: &InvertiblePolynomial) -> Result<bool> {
    Ok(compute_table(p, Window { dmin: 2, dmax: 2 })?.is_empty())
}

/// Every contribution in `window`, sorted by degree, weight, group element, then monomial.
pub fn list_contributions(p: &InvertiblePolynomial, window: Window) -> Result<Vec<Contribution>> {
    list_contributions_with(p, window, EngineOptions::default())
}

pub fn list_contributions_with(
    p: &InvertiblePolynomial,
    window: Window,
    opts: EngineOptions,
) -> Result<Vec<Contribution>> {
    let mut v = all_contributions(p, window, opts)?;
    v.sort();
    Ok(v)
}
