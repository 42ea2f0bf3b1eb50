//! Invertible polynomials: parsing, shape validation, transpose and weights.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{determinant, IntMatrix};

/// A sum of `n+1` monomials in `n+1` variables whose exponent matrix is
/// nonsingular; row `i` of the matrix is the exponent vector of monomial `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvertiblePolynomial {
    matrix: Vec<Vec<u32>>,
    varnames: Vec<String>,
}

/// `(d_1, ..., d_{n+1}; h)` with `A·d = h·𝟙`, primitive, plus `d0 = h − Σ d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    pub d: Vec<i64>,
    pub h: i64,
    pub d0: i64,
}

/// Atomic summand types after simultaneous row/column permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Fermat(usize),
    Chain(Vec<usize>),
    Loop(Vec<usize>),
}

/// JSON form: `{ "vars": n+1, "rows": [[a11, ...], ...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: usize,
    pub rows: Vec<Vec<u32>>,
}

impl InvertiblePolynomial {
    /// Builds and fully validates a polynomial from its exponent rows.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let p = Self::from_rows_unchecked_shape(rows)?;
        p.atoms()?;
        Ok(p)
    }

    /// Like [`from_rows`](Self::from_rows) but only requires a square
    /// nonsingular matrix in which every variable occurs.
    pub fn from_rows_unchecked_shape(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotInvertible("empty polynomial".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotInvertible(format!(
                "{} monomials but exponent rows of length {:?}",
                n,
                rows.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if rows[..i].contains(r) {
                return Err(Error::NotInvertible(format!("repeated monomial in row {}", i + 1)));
            }
        }
        for j in 0..n {
            if rows.iter().all(|r| r[j] == 0) {
                return Err(Error::NotInvertible(format!("variable x{} does not occur", j + 1)));
            }
        }
        let p = InvertiblePolynomial {
            varnames: (1..=n).map(|i| format!("x{i}")).collect(),
            matrix: rows,
        };
        if determinant(&p.int_matrix()).is_zero() {
            return Err(Error::NotInvertible("exponent matrix is singular".into()));
        }
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rows(parse_rows(text)?)
    }

    /// Parses without the Fermat/chain/loop shape check.
    pub fn parse_nonstandard(text: &str) -> Result<Self> {
        Self::from_rows_unchecked_shape(parse_rows(text)?)
    }

    pub fn nvars(&self) -> usize {
        self.matrix.len()
    }

    /// The `n` in `𝔸^{n+2}`: one less than the number of variables.
    pub fn n(&self) -> i64 {
        self.nvars() as i64 - 1
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.matrix[i][j]
    }

    pub fn varnames(&self) -> &[String] {
        &self.varnames
    }

    pub fn int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.matrix)
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.int_matrix())
    }

    /// Berglund–Hübsch transpose.
    pub fn transpose(&self) -> Self {
        let n = self.nvars();
        let rows = (0..n).map(|j| (0..n).map(|i| self.matrix[i][j]).collect()).collect();
        InvertiblePolynomial { matrix: rows, varnames: self.varnames.clone() }
    }

    /// The unique primitive positive solution of `A·d = h·𝟙`.
    pub fn weights(&self) -> Result<WeightSystem> {
        let n = self.nvars();
        // Gauss–Jordan over ℚ on [A | 𝟙].
        let mut a: Vec<Vec<BigRational>> = self
            .matrix
            .iter()
            .map(|r| {
                let mut row: Vec<BigRational> =
                    r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
                row.push(BigRational::one());
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .ok_or_else(|| Error::NotInvertible("exponent matrix is singular".into()))?;
            a.swap(col, p);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in col..=n {
                        let v = &f * &a[col][j];
                        a[i][j] -= v;
                    }
                }
            }
        }
        // d_i / h = a[i][n]; clear denominators.
        let sol: Vec<BigRational> = a.into_iter().map(|r| r[n].clone()).collect();
        if sol.iter().any(|x| !x.is_positive()) {
            return Err(Error::NoPositiveSolution);
        }
        let h = sol.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut d: Vec<BigInt> = sol.iter().map(|x| (x * BigRational::from_integer(h.clone())).to_integer()).collect();
        let g = d.iter().fold(h.clone(), |acc, x| acc.gcd(x));
        d.iter_mut().for_each(|x| *x /= &g);
        let h = h / &g;
        let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()));
        let d: Vec<i64> = d.iter().map(to_i64).collect::<Result<_>>()?;
        let h = to_i64(&h)?;
        let d0 = h - d.iter().sum::<i64>();
        Ok(WeightSystem { d, h, d0 })
    }

    /// Decomposes into Fermat, chain and loop atoms, or reports why it cannot.
    pub fn atoms(&self) -> Result<Vec<Atom>> {
        let n = self.nvars();
        let mut main = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if !assign_main(self, 0, &mut main, &mut used) {
            return Err(Error::NotInvertible(
                "not a sum of Fermat, chain and loop monomials".into(),
            ));
        }
        // edge: main variable of row i -> its second variable
        let mut next = vec![None; n];
        let mut row_of = vec![0; n];
        for i in 0..n {
            row_of[main[i]] = i;
            next[main[i]] = (0..n).find(|&j| j != main[i] && self.matrix[i][j] > 0);
        }
        let mut indeg = vec![0usize; n];
        for &t in next.iter().flatten() {
            indeg[t] += 1;
        }
        let mut atoms = Vec::new();
        let mut seen = vec![false; n];
        // chains start at variables with no incoming edge
        for start in 0..n {
            if indeg[start] != 0 || seen[start] {
                continue;
            }
            let mut path = vec![start];
            seen[start] = true;
            let mut cur = start;
            while let Some(t) = next[cur] {
                seen[t] = true;
                path.push(t);
                cur = t;
            }
            let tail = *path.last().unwrap();
            if self.matrix[row_of[tail]][tail] < 2 {
                return Err(Error::NotInvertible(format!(
                    "x{} appears with exponent 1 in a pure power",
                    tail + 1
                )));
            }
            if path.len() == 1 {
                atoms.push(Atom::Fermat(start));
            } else {
                atoms.push(Atom::Chain(path));
            }
        }
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = next[start].unwrap();
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = next[cur].unwrap();
            }
            atoms.push(Atom::Loop(cycle));
        }
        Ok(atoms)
    }

    /// Polynomial restricted to the given variables: the rows whose support is
    /// contained in `fixed` (indexed 0-based over `x1..x_{n+1}`).
    pub fn surviving_rows(&self, fixed: &[bool]) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.matrix[i].iter().enumerate().all(|(j, &e)| e == 0 || fixed[j]))
            .collect()
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson { vars: self.nvars(), rows: self.matrix.clone() }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        if j.rows.len() != j.vars {
            return Err(Error::Schema(format!("vars = {} but {} rows", j.vars, j.rows.len())));
        }
        Self::from_rows_unchecked_shape(j.rows.clone())
    }
}

/// Backtracking search for a distinct "main" variable per row such that every
/// other nonzero entry of that row equals 1, at most one such entry exists, and
/// no variable is the secondary variable of two rows.
fn assign_main(p: &InvertiblePolynomial, row: usize, main: &mut [usize], used: &mut [bool]) -> bool {
    let n = p.nvars();
    if row == n {
        let mut indeg = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if j != main[i] && p.matrix[i][j] > 0 {
                    indeg[j] += 1;
                }
            }
        }
        return indeg.iter().all(|&d| d <= 1);
    }
    let support: Vec<usize> = (0..n).filter(|&j| p.matrix[row][j] > 0).collect();
    if support.len() > 2 {
        return false;
    }
    for &m in &support {
        if used[m] {
            continue;
        }
        if support.iter().any(|&j| j != m && p.matrix[row][j] != 1) {
            continue;
        }
        used[m] = true;
        main[row] = m;
        if assign_main(p, row + 1, main, used) {
            return true;
        }
        used[m] = false;
    }
    false
}

fn parse_rows(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let terms = parser.poly()?;
    let nvars = terms.iter().flat_map(|t| t.iter().map(|(v, _)| *v)).max().unwrap_or(0);
    let rows = terms
        .into_iter()
        .map(|t| {
            let mut row = vec![0u32; nvars];
            for (v, e) in t {
                row[v - 1] += e;
            }
            row
        })
        .collect();
    Ok(rows)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, what: &str) -> Error {
        Error::Syntax(format!("{what} at byte {}", self.pos))
    }

    fn poly(&mut self) -> Result<Vec<Vec<(usize, u32)>>> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                None => return Ok(terms),
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(b'-') => return Err(Error::Coefficient("negative coefficients are not supported".into())),
                Some(_) => return Err(self.error("expected '+' or end of input")),
            }
        }
    }

    fn term(&mut self) -> Result<Vec<(usize, u32)>> {
        match self.peek() {
            Some(b'-') => return Err(Error::Coefficient("negative coefficients are not supported".into())),
            Some(c) if c.is_ascii_digit() => {
                return Err(Error::Coefficient("only unit coefficients are supported".into()))
            }
            _ => {}
        }
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Err(Error::Coefficient("only unit coefficients are supported".into()));
            }
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        if self.peek() != Some(b'x') {
            return Err(self.error("expected variable"));
        }
        self.pos += 1;
        let var = self.nat()?;
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.nat()?
        } else {
            1
        };
        let var = usize::try_from(var).map_err(|_| self.error("variable index too large"))?;
        let exp = u32::try_from(exp).map_err(|_| self.error("exponent too large"))?;
        Ok((var, exp))
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        if digits.is_empty() {
            return Err(self.error("expected number"));
        }
        if digits[0] == b'0' {
            return Err(Error::Syntax(format!("numbers must not start with 0 at byte {start}")));
        }
        std::str::from_utf8(digits)
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax(format!("number too large at byte {start}")))
    }
}

impl fmt::Display for InvertiblePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .matrix
            .iter()
            .map(|row| {
                let factors: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| match e {
                        1 => self.varnames[j].clone(),
                        e => format!("{}^{}", self.varnames[j], e),
                    })
                    .collect();
                factors.join("*")
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}
