//! The symmetry group `Γ_w`, its character lattice, and the finite group `ker χ`.
//!
//! Characters of `Γ_w` are integer vectors in `ℤ^{n+2}` (coordinates `x0..x_{n+1}`)
//! modulo the relation lattice `R` spanned by `r_i = (−1, a_i1 − 1, ..., a_i,n+1 − 1)`.
//! The character `χ` is the all-ones vector `𝟙`. A monomial with total exponent
//! vector `b` is `χ^u`-isotypical exactly when `b − u·𝟙 ∈ R`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{quotient, IntMatrix, LinearSolver};
use crate::poly::{InvertiblePolynomial, WeightSystem};

/// Materialize `ker χ` as a sorted list up to this order; stream above it.
pub const MATERIALIZE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct SymmetryContext {
    poly: InvertiblePolynomial,
    weights: WeightSystem,
    relations: IntMatrix,
    /// Solves `y·R + u·𝟙 = b`.
    chi_solver: LinearSolver,
    /// Solves `y·R − b0·e0 + u·𝟙 = (0, b_1, ..., b_{n+1})`.
    family_solver: LinearSolver,
    /// Primitive generator `(Δb0, Δu)` of the homogeneous solutions, `Δb0 > 0`.
    family_step: (i64, i64),
}

/// An element of `ker χ`: phases of `t_1..t_{n+1}` as fractions in `[0, 1)`.
/// The phase of `t_0` is minus their sum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub phases: Vec<BigRational>,
    /// `fixed[j]` for `j ≥ 1` refers to `x_j`; `fixed[0]` refers to `x0`.
    pub fixed: Vec<bool>,
}

impl GroupElement {
    fn new(phases: Vec<BigRational>) -> Self {
        let sum: BigRational = phases.iter().sum();
        let mut fixed = Vec::with_capacity(phases.len() + 1);
        fixed.push(sum.is_integer());
        fixed.extend(phases.iter().map(Zero::is_zero));
        GroupElement { phases, fixed }
    }

    pub fn fixes_x0(&self) -> bool {
        self.fixed[0]
    }

    /// Fixed-variable mask over `x1..x_{n+1}` (0-based).
    pub fn fixed_vars(&self) -> Vec<bool> {
        self.fixed[1..].to_vec()
    }

    /// Number of fixed variables among `x1..x_{n+1}`.
    pub fn k(&self) -> usize {
        self.fixed[1..].iter().filter(|&&f| f).count()
    }

    /// Indices in `{0, ..., n+1}` of the fixed variables.
    pub fn fixed_set(&self) -> Vec<usize> {
        self.fixed.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
    }

    pub fn phase_of_x0(&self) -> BigRational {
        let sum: BigRational = self.phases.iter().sum();
        crate::lattice::frac_mod1(&-sum)
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ph: Vec<String> = self.phases.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", ph.join(", "))
    }
}

/// `(b0, u) = (b0 + t·Δb0, u + t·Δu)` for `t ∈ ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineFamily {
    pub b0: i64,
    pub u: i64,
    pub db0: i64,
    pub du: i64,
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

impl SymmetryContext {
    pub fn build(poly: &InvertiblePolynomial) -> Result<Self> {
        let n1 = poly.nvars();
        let weights = poly.weights()?;
        let rows: Vec<Vec<i64>> = poly
            .rows()
            .iter()
            .map(|r| std::iter::once(-1).chain(r.iter().map(|&a| a as i64 - 1)).collect())
            .collect();
        let relations = IntMatrix::from_rows(&rows);
        let ones = IntMatrix::from_rows(&[vec![1i64; n1 + 1]]);
        let chi_solver = LinearSolver::new(&relations.stack(&ones));
        if chi_solver.rank() != n1 + 1 {
            return Err(Error::DegenerateCharacter);
        }
        let mut e0 = vec![0i64; n1 + 1];
        e0[0] = -1;
        let family_matrix = relations.stack(&IntMatrix::from_rows(&[e0])).stack(&ones);
        let family_solver = LinearSolver::new(&family_matrix);
        let kernel = family_solver.kernel();
        debug_assert_eq!(kernel.len(), 1);
        let g = &kernel[0];
        let (mut db0, mut du) = (to_i64(&g[n1])?, to_i64(&g[n1 + 1])?);
        if db0 == 0 {
            return Err(Error::DegenerateCharacter);
        }
        if db0 < 0 {
            db0 = -db0;
            du = -du;
        }
        Ok(SymmetryContext {
            poly: poly.clone(),
            weights,
            relations,
            chi_solver,
            family_solver,
            family_step: (db0, du),
        })
    }

    pub fn poly(&self) -> &InvertiblePolynomial {
        &self.poly
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    /// Relation lattice `R ⊂ ℤ^{n+2}`, one row per monomial of `w`.
    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn family_step(&self) -> (i64, i64) {
        self.family_step
    }

    /// `|ker χ| = |det A|`.
    pub fn ker_chi_order(&self) -> BigInt {
        let d = self.poly.determinant();
        if d < BigInt::zero() {
            -d
        } else {
            d
        }
    }

    /// Unsorted enumeration of `ker χ`.
    pub fn ker_chi_iter(&self) -> impl Iterator<Item = GroupElement> {
        let q = quotient(&self.poly.int_matrix());
        let elems: Vec<Vec<BigRational>> = q.elements().collect();
        elems.into_iter().map(GroupElement::new)
    }

    /// All of `ker χ`, sorted lexicographically by phases.
    pub fn ker_chi(&self) -> Vec<GroupElement> {
        let mut v: Vec<GroupElement> = self.ker_chi_iter().collect();
        v.sort();
        v
    }

    /// Number of elements of `ker χ` per fixed-variable set (indices over `x0..x_{n+1}`).
    pub fn fixed_census(&self) -> BTreeMap<Vec<usize>, u64> {
        let mut census = BTreeMap::new();
        for g in self.ker_chi_iter() {
            *census.entry(g.fixed_set()).or_insert(0) += 1;
        }
        census
    }

    /// The unique `u` with `b − u·𝟙 ∈ R`, if any.
    pub fn chi_power(&self, b: &[i64]) -> Option<i64> {
        assert_eq!(b.len(), self.poly.nvars() + 1);
        let sol = self.chi_solver.solve(&to_big(b))?;
        Some(to_i64(sol.particular.last().unwrap()).expect("χ-power overflows i64"))
    }

    /// All `(b0, u)` with `(b0, b_1, ..., b_{n+1}) − u·𝟙 ∈ R`, as an affine line.
    pub fn solve_family(&self, rest: &[i64]) -> Option<AffineFamily> {
        let n1 = self.poly.nvars();
        assert_eq!(rest.len(), n1);
        let mut target = vec![BigInt::zero()];
        target.extend(rest.iter().map(|&x| BigInt::from(x)));
        let sol = self.family_solver.solve(&target)?;
        let (db0, du) = self.family_step;
        Some(AffineFamily {
            b0: to_i64(&sol.particular[n1]).ok()?,
            u: to_i64(&sol.particular[n1 + 1]).ok()?,
            db0,
            du,
        })
    }
}
