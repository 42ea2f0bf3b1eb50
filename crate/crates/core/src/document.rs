//! The `v1` table document: JSON (sorted keys), CSV and a plain-text layout.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::engine::{compute_table, hh2_vanishes, list_contributions, BigradedTable, Contribution, Window};
use crate::error::{Error, Result};
use crate::poly::{InvertiblePolynomial, PolyJson, WeightSystem};
use crate::symmetry::SymmetryContext;

pub const SCHEMA: &str = "v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub d: i64,
    pub q: i64,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributionRecord {
    pub d: i64,
    pub q: i64,
    pub u: i64,
    pub kind: String,
    pub monomial: String,
    pub b: Vec<i64>,
    /// Phases of `t_1..t_{n+1}` as reduced fractions.
    pub gamma: Vec<String>,
    /// Fixed variables, `0` standing for `x0`.
    pub fixed: Vec<usize>,
}

impl From<&Contribution> for ContributionRecord {
    fn from(c: &Contribution) -> Self {
        ContributionRecord {
            d: c.degree,
            q: c.weight,
            u: c.u,
            kind: c.kind().to_string(),
            monomial: c.monomial.pattern(),
            b: c.monomial.b.clone(),
            gamma: c.gamma.phases.iter().map(|p| p.to_string()).collect(),
            fixed: c.gamma.fixed_set(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub schema: String,
    pub version: String,
    pub input: String,
    pub poly: PolyJson,
    pub transpose: PolyJson,
    pub weights: WeightSystem,
    pub ker_chi_order: u64,
    pub hh2_vanishes: bool,
    pub window: [i64; 2],
    pub cells: Vec<Cell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<ContributionRecord>>,
}

impl TableDocument {
    /// Run the engine on `p` and collect everything a document carries.
    pub fn compute(p: &InvertiblePolynomial, input: &str, window: Window, with_contributions: bool) -> Result<Self> {
        let ctx = SymmetryContext::build(p)?;
        let order = ctx.ker_chi_order();
        let ker_chi_order = order.to_u64().ok_or_else(|| Error::Overflow(order.to_string()))?;
        let table = compute_table(p, window)?;
        let contributions = if with_contributions {
            Some(list_contributions(p, window)?.iter().map(ContributionRecord::from).collect())
        } else {
            None
        };
        Ok(TableDocument {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input: input.to_string(),
            poly: p.to_json(),
            transpose: p.transpose().to_json(),
            weights: ctx.weights().clone(),
            ker_chi_order,
            hh2_vanishes: hh2_vanishes(p)?,
            window: [window.dmin, window.dmax],
            cells: table.cells().iter().map(|(&(d, q), &dim)| Cell { d, q, dim }).collect(),
            contributions,
        })
    }

    pub fn table(&self) -> Result<BigradedTable> {
        let window = Window::new(self.window[0], self.window[1]).map_err(|e| Error::Schema(e.to_string()))?;
        BigradedTable::from_cells(window, self.cells.iter().map(|c| ((c.d, c.q), c.dim)))
    }

    pub fn polynomial(&self) -> Result<InvertiblePolynomial> {
        InvertiblePolynomial::from_json(&self.poly)
    }

    /// Pretty-printed JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("document serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(Error::Schema(format!("unsupported schema {:?}", doc.schema)));
        }
        doc.table()?;
        Ok(doc)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,weight,dim\n");
        for c in &self.cells {
            writeln!(out, "{},{},{}", c.d, c.q, c.dim).unwrap();
        }
        out
    }

    /// Degree rows, weight columns, plus the metadata lines.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        let poly = self.polynomial().map(|p| p.to_string()).unwrap_or_else(|_| self.input.clone());
        let transpose =
            InvertiblePolynomial::from_json(&self.transpose).map(|p| p.to_string()).unwrap_or_default();
        let w = &self.weights;
        let d: Vec<String> = w.d.iter().map(i64::to_string).collect();
        writeln!(out, "w          = {poly}").unwrap();
        writeln!(out, "transpose  = {transpose}").unwrap();
        writeln!(out, "weights    = ({}; h={}), d0 = {}", d.join(", "), w.h, w.d0).unwrap();
        writeln!(out, "|ker chi|  = {}", self.ker_chi_order).unwrap();
        writeln!(out, "HH^2 = 0   : {}", self.hh2_vanishes).unwrap();
        writeln!(out, "window     = [{}, {}]", self.window[0], self.window[1]).unwrap();
        let weights: BTreeSet<i64> = self.cells.iter().map(|c| c.q).collect();
        let weights: Vec<i64> = weights.into_iter().collect();
        let header: Vec<String> = weights.iter().map(|q| format!("q={q}")).collect();
        let width = header.iter().map(String::len).max().unwrap_or(3).max(3);
        write!(out, "\n{:>5} {:>5} |", "d", "dim").unwrap();
        for h in &header {
            write!(out, " {h:>width$}").unwrap();
        }
        out.push('\n');
        for deg in (self.window[0]..=self.window[1]).rev() {
            let row: Vec<&Cell> = self.cells.iter().filter(|c| c.d == deg).collect();
            let total: u64 = row.iter().map(|c| c.dim).sum();
            write!(out, "{deg:>5} {total:>5} |").unwrap();
            for q in &weights {
                match row.iter().find(|c| c.q == *q) {
                    Some(c) => write!(out, " {:>width$}", c.dim).unwrap(),
                    None => write!(out, " {:>width$}", ".").unwrap(),
                }
            }
            out.push('\n');
        }
        if let Some(list) = &self.contributions {
            out.push_str("\ncontributions (d, q, kind, monomial, gamma):\n");
            for c in list {
                writeln!(out, "{:>5} {:>5}  {}  {}  ({})", c.d, c.q, c.kind, c.monomial, c.gamma.join(", ")).unwrap();
            }
        }
        out
    }
}
