//! Monomial bases of Jacobian rings via Buchberger's algorithm over ℚ.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::InvertiblePolynomial;

pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => {
                let da: u64 = a.iter().map(|&x| x as u64).sum();
                let db: u64 = b.iter().map(|&x| x as u64).sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn quot(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Sparse polynomial over ℚ; terms sorted strictly descending in `order`.
#[derive(Clone, Debug, PartialEq)]
struct QPoly {
    terms: Vec<(Monomial, BigRational)>,
}

impl QPoly {
    fn from_terms(mut terms: Vec<(Monomial, BigRational)>, order: MonomialOrder) -> Self {
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        QPoly { terms: out }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].1.recip();
        for (_, c) in &mut self.terms {
            *c *= &inv;
        }
    }

    /// `self − coef · x^shift · g`
    fn sub_scaled(&self, coef: &BigRational, shift: &[u32], g: &QPoly, order: MonomialOrder) -> QPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut it_a = self.terms.iter().peekable();
        let mut it_b = g
            .terms
            .iter()
            .map(|(m, c)| (m.iter().zip(shift).map(|(x, y)| x + y).collect::<Monomial>(), c * coef))
            .peekable();
        loop {
            match (it_a.peek(), it_b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(it_a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, c) = it_b.next().unwrap();
                    out.push((m, -c));
                }
                (Some((ma, _)), Some((mb, _))) => match order.cmp(ma, mb) {
                    Ordering::Greater => out.push(it_a.next().unwrap().clone()),
                    Ordering::Less => {
                        let (m, c) = it_b.next().unwrap();
                        out.push((m, -c));
                    }
                    Ordering::Equal => {
                        let (m, ca) = it_a.next().unwrap().clone();
                        let (_, cb) = it_b.next().unwrap();
                        let c = ca - cb;
                        if !c.is_zero() {
                            out.push((m, c));
                        }
                    }
                },
            }
        }
        QPoly { terms: out }
    }

    /// Full reduction modulo a list of monic polynomials.
    fn reduce(&self, basis: &[QPoly], order: MonomialOrder) -> QPoly {
        let mut p = self.clone();
        let mut rem = Vec::new();
        while !p.is_zero() {
            let (m, c) = p.terms[0].clone();
            match basis.iter().find(|g| divides(g.lm(), &m)) {
                Some(g) => {
                    let shift = quot(&m, g.lm());
                    p = p.sub_scaled(&c, &shift, g, order);
                }
                None => {
                    rem.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        QPoly { terms: rem }
    }
}

fn s_polynomial(f: &QPoly, g: &QPoly, order: MonomialOrder) -> QPoly {
    let l = lcm(f.lm(), g.lm());
    let sf = quot(&l, f.lm());
    let sg = quot(&l, g.lm());
    // both monic
    let zero = QPoly { terms: vec![] };
    let one = BigRational::one();
    let a = zero.sub_scaled(&-one.clone(), &sf, f, order);
    a.sub_scaled(&one, &sg, g, order)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
fn groebner(gens: Vec<QPoly>, order: MonomialOrder) -> Vec<QPoly> {
    let mut basis: Vec<QPoly> = Vec::new();
    for mut g in gens.into_iter().filter(|g| !g.is_zero()) {
        g.make_monic();
        basis.push(g);
    }
    let mut pairs: Vec<(usize, usize)> =
        (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let idx = (0..pairs.len())
            .min_by(|&x, &y| {
                let (a, b) = pairs[x];
                let (c, d) = pairs[y];
                order.cmp(&lcm(basis[a].lm(), basis[b].lm()), &lcm(basis[c].lm(), basis[d].lm()))
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        let (fi, fj) = (basis[i].lm(), basis[j].lm());
        if fi.iter().zip(fj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = s_polynomial(&basis[i], &basis[j], order).reduce(&basis, order);
        if !r.is_zero() {
            let mut r = r;
            r.make_monic();
            let new = basis.len();
            basis.push(r);
            pairs.extend((0..new).map(|i| (i, new)));
        }
    }
    // minimize
    let mut keep: Vec<QPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && divides(h.lm(), g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // inter-reduce
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<QPoly> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let head = QPoly { terms: vec![keep[i].terms[0].clone()] };
        let tail = QPoly { terms: keep[i].terms[1..].to_vec() }.reduce(&others, order);
        let mut terms = head.terms;
        terms.extend(tail.terms);
        reduced.push(QPoly { terms });
    }
    reduced.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    reduced
}

/// `w` with every monomial containing an unfixed variable removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPolynomial {
    pub parent: InvertiblePolynomial,
    /// Mask over `x1..x_{n+1}`, 0-based.
    pub fixed: Vec<bool>,
    /// Exponent vectors (full length) of the surviving monomials.
    pub terms: Vec<Vec<u32>>,
}

impl RestrictedPolynomial {
    pub fn variables(&self) -> Vec<usize> {
        (0..self.fixed.len()).filter(|&j| self.fixed[j]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn restrict(p: &InvertiblePolynomial, fixed: &[bool]) -> RestrictedPolynomial {
    assert_eq!(fixed.len(), p.nvars());
    let terms = p.surviving_rows(fixed).into_iter().map(|i| p.rows()[i].clone()).collect();
    RestrictedPolynomial { parent: p.clone(), fixed: fixed.to_vec(), terms }
}

/// Standard monomials of the Jacobian ideal, as exponent vectors over the
/// fixed variables (in increasing index order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub variables: Vec<usize>,
    pub monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    /// Exponent vector of basis element `i` over all `x1..x_{n+1}`.
    pub fn full_exponents(&self, i: usize, nvars: usize) -> Vec<u32> {
        let mut e = vec![0; nvars];
        for (v, &x) in self.variables.iter().zip(&self.monomials[i]) {
            e[*v] = x;
        }
        e
    }
}

pub fn monomial_basis(r: &RestrictedPolynomial, order: MonomialOrder) -> Result<MonomialBasis> {
    let vars = r.variables();
    if vars.is_empty() {
        return Ok(MonomialBasis { variables: vars, monomials: vec![vec![]] });
    }
    let local = |e: &[u32]| -> Monomial { vars.iter().map(|&v| e[v]).collect() };
    let partials: Vec<QPoly> = vars
        .iter()
        .map(|&v| {
            let terms = r
                .terms
                .iter()
                .filter(|t| t[v] > 0)
                .map(|t| {
                    let mut e = t.clone();
                    e[v] -= 1;
                    (local(&e), BigRational::from_integer(BigInt::from(t[v])))
                })
                .collect();
            QPoly::from_terms(terms, order)
        })
        .collect();
    let gb = groebner(partials, order);
    let leads: Vec<&Monomial> = gb.iter().map(QPoly::lm).collect();
    let not_isolated = || {
        let names: Vec<String> = vars.iter().map(|v| format!("x{}", v + 1)).collect();
        Error::NotIsolated(format!("{{{}}}", names.join(", ")))
    };
    // zero-dimensional iff every variable has a pure power among the leading monomials
    let mut bounds = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        let e = leads
            .iter()
            .filter(|m| m.iter().enumerate().all(|(j, &x)| j == i || x == 0))
            .map(|m| m[i])
            .min()
            .ok_or_else(not_isolated)?;
        bounds.push(e);
    }
    let mut monomials = Vec::new();
    let mut cur = vec![0u32; vars.len()];
    'outer: loop {
        if !leads.iter().any(|l| divides(l, &cur)) {
            monomials.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                break 'outer;
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
    monomials.sort_by(|a, b| order.cmp(a, b));
    Ok(MonomialBasis { variables: vars, monomials })
}

pub fn milnor_number(p: &InvertiblePolynomial) -> Result<usize> {
    let all = vec![true; p.nvars()];
    Ok(monomial_basis(&restrict(p, &all), MonomialOrder::Grevlex)?.dimension())
}

/// Bases keyed by fixed-variable mask, computed on first use.
#[derive(Debug)]
pub struct JacobianCache {
    poly: InvertiblePolynomial,
    order: MonomialOrder,
    table: RwLock<HashMap<Vec<bool>, Arc<MonomialBasis>>>,
}

impl JacobianCache {
    pub fn new(poly: &InvertiblePolynomial, order: MonomialOrder) -> Self {
        JacobianCache { poly: poly.clone(), order, table: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, fixed: &[bool]) -> Result<Arc<MonomialBasis>> {
        if let Some(b) = self.table.read().unwrap().get(fixed) {
            return Ok(b.clone());
        }
        let basis = Arc::new(monomial_basis(&restrict(&self.poly, fixed), self.order)?);
        let mut table = self.table.write().unwrap();
        Ok(table.entry(fixed.to_vec()).or_insert(basis).clone())
    }
}
