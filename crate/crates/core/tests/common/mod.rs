//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hhdim_core::{
    compute_table, compute_table_with, list_contributions, rescale, scale_compare, EngineOptions,
    InvertiblePolynomial, Kind, MonomialOrder, ScaleVerdict, SymmetryContext, Window,
};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

#[derive(Clone, Copy, Debug)]
pub enum AtomKind {
    Fermat,
    Chain,
    Loop,
}

/// Atom layouts on four variables.
const SHAPES: &[&[(AtomKind, usize)]] = &[
    &[(AtomKind::Fermat, 1), (AtomKind::Fermat, 1), (AtomKind::Fermat, 1), (AtomKind::Fermat, 1)],
    &[(AtomKind::Chain, 2), (AtomKind::Fermat, 1), (AtomKind::Fermat, 1)],
    &[(AtomKind::Loop, 2), (AtomKind::Fermat, 1), (AtomKind::Fermat, 1)],
    &[(AtomKind::Chain, 3), (AtomKind::Fermat, 1)],
    &[(AtomKind::Loop, 3), (AtomKind::Fermat, 1)],
    &[(AtomKind::Chain, 2), (AtomKind::Chain, 2)],
    &[(AtomKind::Chain, 2), (AtomKind::Loop, 2)],
    &[(AtomKind::Loop, 2), (AtomKind::Loop, 2)],
    &[(AtomKind::Chain, 4)],
    &[(AtomKind::Loop, 4)],
];

pub fn rows_for(shape: &[(AtomKind, usize)], exps: &[u32]) -> Vec<Vec<u32>> {
    let n: usize = shape.iter().map(|s| s.1).sum();
    let mut rows = Vec::new();
    let mut start = 0;
    for &(kind, m) in shape {
        for i in 0..m {
            let mut r = vec![0; n];
            r[start + i] = exps[start + i];
            match kind {
                AtomKind::Fermat => {}
                AtomKind::Chain if i + 1 < m => r[start + i + 1] = 1,
                AtomKind::Chain => {}
                AtomKind::Loop => r[start + (i + 1) % m] = 1,
            }
            rows.push(r);
        }
        start += m;
    }
    rows
}

/// Random invertible polynomials in four variables with exponents in `2..=max_exp`.
pub fn arb_poly(max_exp: u32) -> impl Strategy<Value = InvertiblePolynomial> {
    (0..SHAPES.len(), proptest::collection::vec(2..=max_exp, 4)).prop_filter_map("unusable polynomial", |(s, e)| {
        let p = InvertiblePolynomial::from_rows(rows_for(SHAPES[s], &e)).ok()?;
        let w = p.weights().ok()?;
        let det = p.determinant().abs().to_u64()?;
        (w.d0 != 0 && det <= 2000).then_some(p)
    })
}

/// Closure of the columns of `A^{-1}` under addition in `(ℚ/ℤ)^{n+1}`.
pub fn brute_force_ker_chi(p: &InvertiblePolynomial) -> BTreeSet<Vec<BigRational>> {
    let n = p.nvars();
    let a: Vec<Vec<BigRational>> =
        p.rows().iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let inv = invert(a);
    let frac = |x: &BigRational| {
        let f = x - x.floor();
        if f.is_negative() { f + BigRational::one() } else { f }
    };
    let gens: Vec<Vec<BigRational>> = (0..n).map(|j| (0..n).map(|i| frac(&inv[i][j])).collect()).collect();
    let zero = vec![BigRational::zero(); n];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Vec<BigRational> = x.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular");
        a.swap(c, p);
        inv.swap(c, p);
        let s = a[c][c].recip();
        for j in 0..n {
            a[c][j] *= &s;
            inv[c][j] *= &s;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let (x, y) = (&a[c][j] * &f, &inv[c][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    inv
}

/// `u` with `b − u𝟙 ∈ R`, decided through the finite group and the weight grading.
pub fn chi_power_oracle(p: &InvertiblePolynomial, group: &BTreeSet<Vec<BigRational>>, b: &[i64]) -> Option<i64> {
    let w = p.weights().unwrap();
    for phi in group {
        let s: BigRational =
            phi.iter().zip(&b[1..]).map(|(f, &bj)| f * BigRational::from_integer(BigInt::from(bj - b[0]))).sum();
        if !s.is_integer() {
            return None;
        }
    }
    let num = b[0] * w.d0 + b[1..].iter().zip(&w.d).map(|(x, y)| x * y).sum::<i64>();
    assert_eq!(num % w.h, 0);
    Some(num / w.h)
}

pub fn check<T: std::fmt::Debug + PartialEq>(a: T, b: T, what: &str) -> Result<(), TestCaseError> {
    if a == b {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{what}: {a:?} != {b:?}")))
    }
}

pub fn ensure(ok: bool, what: impl Into<String>) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.into()))
    }
}

fn err(e: hhdim_core::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub const PROP_WINDOW: Window = Window { dmin: -10, dmax: 6 };

/// Each A-type contribution in degree d has a B-type twin in degree d+1 with the same exponents.
pub fn prop_ab_pairing(p: &InvertiblePolynomial) -> Result<(), TestCaseError> {
    let w = PROP_WINDOW;
    let list = list_contributions(p, w).map_err(err)?;
    let mut from_a = BTreeMap::new();
    let mut from_b = BTreeMap::new();
    for c in &list {
        let key = (c.gamma.clone(), c.monomial.b.clone(), c.monomial.jac_index);
        match c.kind() {
            Kind::A if c.degree < w.dmax => *from_a.entry((key, c.degree + 1)).or_insert(0) += 1,
            Kind::B if c.weight >= 0 && c.degree > w.dmin => *from_b.entry((key, c.degree)).or_insert(0) += 1,
            _ => {}
        }
    }
    check(from_a, from_b, "A/B pairing")?;
    for d in w.dmin + 1..w.dmax {
        let a = list.iter().filter(|c| c.kind() == Kind::A && c.degree == d).count();
        let b = list.iter().filter(|c| c.kind() == Kind::B && c.degree == d + 1 && c.weight >= 0).count();
        check(a, b, &format!("A-part of HH^{d} vs B-part of HH^{}", d + 1))?;
    }
    Ok(())
}

pub fn prop_basis_order(p: &InvertiblePolynomial) -> Result<(), TestCaseError> {
    let g = compute_table_with(p, PROP_WINDOW, EngineOptions { order: MonomialOrder::Grevlex, parallel: true }).map_err(err)?;
    let l = compute_table_with(p, PROP_WINDOW, EngineOptions { order: MonomialOrder::Lex, parallel: true }).map_err(err)?;
    check(g, l, "grevlex vs lex table")
}

pub fn prop_parallel(p: &InvertiblePolynomial) -> Result<(), TestCaseError> {
    let a = compute_table_with(p, PROP_WINDOW, EngineOptions { parallel: true, ..Default::default() }).map_err(err)?;
    let b = compute_table_with(p, PROP_WINDOW, EngineOptions { parallel: false, ..Default::default() }).map_err(err)?;
    check(a, b, "parallel vs serial table")
}

pub fn prop_ker_chi(p: &InvertiblePolynomial, probes: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let ctx = SymmetryContext::build(p).map_err(err)?;
    let det = p.determinant().abs();
    check(ctx.ker_chi_order(), det.clone(), "|ker chi| vs |det A|")?;
    let brute = brute_force_ker_chi(p);
    check(BigInt::from(brute.len()), det, "brute-force group order")?;
    let ours: BTreeSet<Vec<BigRational>> = ctx.ker_chi().into_iter().map(|g| g.phases).collect();
    ensure(ours == brute, "ker chi elements differ from brute force")?;
    for b in probes {
        check(ctx.chi_power(b), chi_power_oracle(p, &brute, b), &format!("chi_power{b:?}"))?;
    }
    Ok(())
}

pub fn prop_window(p: &InvertiblePolynomial, a: i64, b: i64) -> Result<(), TestCaseError> {
    let (lo, hi) = (a.min(b), a.max(b));
    let big = compute_table(p, PROP_WINDOW).map_err(err)?;
    let small = compute_table(p, Window::new(lo, hi).unwrap()).map_err(err)?;
    check(big.restrict(Window::new(lo, hi).unwrap()).map_err(err)?, small, "restricted vs recomputed")
}

pub fn prop_scale(p: &InvertiblePolynomial, q: &InvertiblePolynomial, num: i64, den: i64) -> Result<(), TestCaseError> {
    let t1 = compute_table(p, PROP_WINDOW).map_err(err)?;
    let t2 = compute_table(q, PROP_WINDOW).map_err(err)?;
    match scale_compare(&t1, &t1).map_err(err)? {
        ScaleVerdict::Equivalent { c, .. } => check(c, Rational64::one(), "self-equivalence")?,
        ScaleVerdict::InconclusiveWindow { .. } => {}
        v => return Err(TestCaseError::fail(format!("self comparison gave {v}"))),
    }
    let (ab, ba) = (scale_compare(&t1, &t2).map_err(err)?, scale_compare(&t2, &t1).map_err(err)?);
    match (&ab, &ba) {
        (ScaleVerdict::Equivalent { c, .. }, ScaleVerdict::Equivalent { c: c2, .. }) => {
            let neg = |t: &hhdim_core::BigradedTable| t.restrict(Window::new(PROP_WINDOW.dmin, -1).unwrap()).unwrap();
            check(rescale(&neg(&t1), *c), Some(neg(&t2)), "forward scale")?;
            check(rescale(&neg(&t2), *c2), Some(neg(&t1)), "backward scale")?;
        }
        (ScaleVerdict::Distinguished { .. }, ScaleVerdict::Distinguished { .. }) => {}
        (ScaleVerdict::InconclusiveWindow { .. }, ScaleVerdict::InconclusiveWindow { .. }) => {}
        _ => return Err(TestCaseError::fail(format!("asymmetric verdicts {ab} / {ba}"))),
    }
    let c = Rational64::new(num, den);
    if let Some(s) = rescale(&t1, c) {
        match scale_compare(&t1, &s).map_err(err)? {
            ScaleVerdict::Equivalent { c: found, .. } => {
                let neg = |t: &hhdim_core::BigradedTable| t.restrict(Window::new(PROP_WINDOW.dmin, -1).unwrap()).unwrap();
                check(rescale(&neg(&t1), found), rescale(&neg(&t1), c), "rescaled witness")?;
            }
            ScaleVerdict::InconclusiveWindow { .. } => {}
            v => return Err(TestCaseError::fail(format!("rescaled table gave {v}"))),
        }
    }
    Ok(())
}
