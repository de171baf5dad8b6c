//! AND/OR combinations of halfspaces and generic tables.
//!
//! A `CompositeSpec` is an ordered list of terms joined by one combiner. The
//! OR of unate terms is the union object the sensitivity audits work on; the
//! AND of LTFs is a halfspace intersection. De Morgan duality
//! `1 − (f_1 ∨ … ∨ f_k) = (1−f_1) ∧ … ∧ (1−f_k)` is preserved exactly by
//! [`CompositeSpec::complement`] because LTF complements stay LTFs.

use crate::error::Error;
use crate::exec::Exec;
use crate::Result;

use super::ltf::LinearThresholdFunction;
use super::point::{HypercubePoint, SignVector};
use super::table::{TruthTable, MAX_TABLE_DIM};

/// How terms combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combiner {
    And,
    Or,
}

impl Combiner {
    pub fn dual(self) -> Combiner {
        match self {
            Combiner::And => Combiner::Or,
            Combiner::Or => Combiner::And,
        }
    }
}

/// One term of a composite: a halfspace or an explicit table.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Ltf(LinearThresholdFunction),
    Table(TruthTable),
}

impl Term {
    pub fn n(&self) -> u32 {
        match self {
            Term::Ltf(f) => f.n(),
            Term::Table(t) => t.n(),
        }
    }

    pub fn eval(&self, x: &HypercubePoint) -> bool {
        match self {
            Term::Ltf(f) => f.eval(x),
            Term::Table(t) => t.eval(x),
        }
    }

    pub fn truth_table(&self, exec: Exec) -> Result<TruthTable> {
        match self {
            Term::Ltf(f) => f.truth_table(exec),
            Term::Table(t) => Ok(t.clone()),
        }
    }

    pub fn as_ltf(&self) -> Option<&LinearThresholdFunction> {
        match self {
            Term::Ltf(f) => Some(f),
            Term::Table(_) => None,
        }
    }
}

impl From<LinearThresholdFunction> for Term {
    fn from(f: LinearThresholdFunction) -> Self {
        Term::Ltf(f)
    }
}

impl From<TruthTable> for Term {
    fn from(t: TruthTable) -> Self {
        Term::Table(t)
    }
}

/// Ordered terms under one combiner. With no terms, AND is the constant 1 and
/// OR the constant 0 (the combiner identities).
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSpec {
    n: u32,
    combiner: Combiner,
    terms: Vec<Term>,
}

impl CompositeSpec {
    pub fn new(n: u32, combiner: Combiner, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.n(),
                });
            }
        }
        Ok(CompositeSpec { n, combiner, terms })
    }

    /// Intersection (AND) of halfspaces.
    pub fn intersection(n: u32, terms: Vec<LinearThresholdFunction>) -> Result<Self> {
        Self::new(n, Combiner::And, terms.into_iter().map(Term::Ltf).collect())
    }

    /// Union (OR) of halfspaces.
    pub fn union(n: u32, terms: Vec<LinearThresholdFunction>) -> Result<Self> {
        Self::new(n, Combiner::Or, terms.into_iter().map(Term::Ltf).collect())
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn combiner(&self) -> Combiner {
        self.combiner
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of terms `k`.
    pub fn k(&self) -> usize {
        self.terms.len()
    }

    /// All terms as LTFs, or `None` if any term is a table.
    pub fn ltf_terms(&self) -> Option<Vec<&LinearThresholdFunction>> {
        self.terms.iter().map(Term::as_ltf).collect()
    }

    /// Evaluate the combiner over term outputs (short-circuiting).
    pub fn eval(&self, x: &HypercubePoint) -> bool {
        assert_eq!(
            x.n(),
            self.n,
            "point dimension {} does not match spec dimension {}",
            x.n(),
            self.n
        );
        match self.combiner {
            Combiner::And => self.terms.iter().all(|t| t.eval(x)),
            Combiner::Or => self.terms.iter().any(|t| t.eval(x)),
        }
    }

    /// De Morgan complement: each term complemented, the combiner dualized.
    /// Requires every term to be an LTF (table terms complement trivially via
    /// [`TruthTable::complement`], but then the result is a table spec).
    pub fn complement(&self) -> Result<CompositeSpec> {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                Term::Ltf(f) => Ok(Term::Ltf(f.complement())),
                Term::Table(t) => Ok(Term::Table(t.complement())),
            })
            .collect::<Result<Vec<_>>>()?;
        CompositeSpec::new(self.n, self.combiner.dual(), terms)
    }

    /// Relabel input signs on every term (LTF terms only).
    pub fn flip_signs(&self, s: &SignVector) -> Result<CompositeSpec> {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                Term::Ltf(f) => Ok(Term::Ltf(f.flip_signs(s)?)),
                Term::Table(_) => Err(Error::UnsupportedTerm),
            })
            .collect::<Result<Vec<_>>>()?;
        CompositeSpec::new(self.n, self.combiner, terms)
    }

    /// Materialize the composite's truth table: term tables folded under the
    /// combiner. `n ≤ 30`.
    pub fn truth_table(&self, exec: Exec) -> Result<TruthTable> {
        if self.n > MAX_TABLE_DIM {
            return Err(Error::SizeCap {
                what: "composite truth table",
                limit: MAX_TABLE_DIM,
                requested: self.n,
            });
        }
        let identity = match self.combiner {
            Combiner::And => TruthTable::constant(self.n, true),
            Combiner::Or => TruthTable::constant(self.n, false),
        };
        let mut acc = identity;
        for term in &self.terms {
            let t = term.truth_table(exec)?;
            match self.combiner {
                Combiner::And => acc.and_assign(&t),
                Combiner::Or => acc.or_assign(&t),
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_of_constant_one_terms_is_one() {
        let one = LinearThresholdFunction::constant_one(4);
        let spec = CompositeSpec::intersection(4, vec![one.clone(), one.clone(), one]).unwrap();
        for x in HypercubePoint::iter_all(4) {
            assert!(spec.eval(&x));
        }
    }

    #[test]
    fn empty_combiner_identities() {
        let and0 = CompositeSpec::new(3, Combiner::And, vec![]).unwrap();
        let or0 = CompositeSpec::new(3, Combiner::Or, vec![]).unwrap();
        let x = HypercubePoint::all_minus(3);
        assert!(and0.eval(&x));
        assert!(!or0.eval(&x));
        assert_eq!(and0.truth_table(Exec::Sequential).unwrap().ones(), 8);
        assert_eq!(or0.truth_table(Exec::Sequential).unwrap().ones(), 0);
    }

    #[test]
    fn table_matches_eval_everywhere() {
        let f1 = LinearThresholdFunction::new(vec![2, -1, 1, 1, -2, 1], 0);
        let f2 = LinearThresholdFunction::new(vec![1, 1, 1, -1, 1, -1], -2);
        let spec = CompositeSpec::intersection(6, vec![f1, f2]).unwrap();
        let t = spec.truth_table(Exec::default()).unwrap();
        for x in HypercubePoint::iter_all(6) {
            assert_eq!(t.eval(&x), spec.eval(&x));
        }
    }

    #[test]
    fn de_morgan_by_enumeration() {
        let f1 = LinearThresholdFunction::new(vec![1, 1, -1, 2], 1);
        let f2 = LinearThresholdFunction::new(vec![-1, 1, 1, 1], 0);
        let and = CompositeSpec::intersection(4, vec![f1, f2]).unwrap();
        let or_of_complements = and.complement().unwrap();
        assert_eq!(or_of_complements.combiner(), Combiner::Or);
        let a = and.truth_table(Exec::Sequential).unwrap().complement();
        let b = or_of_complements.truth_table(Exec::Sequential).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let f = LinearThresholdFunction::unit(3, 0);
        assert!(CompositeSpec::intersection(4, vec![f]).is_err());
    }
}
