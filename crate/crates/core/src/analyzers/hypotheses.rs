//! Dense lookup table for a hypothesis relation `H ⊆ Θ × X × Y` that is
//! functional and total as `Θ × X → Y`.

use crate::error::{Error, Result};
use crate::relation::{is_functional, Atom, FiniteSet, Relation};

#[derive(Debug, Clone)]
pub struct HypothesisTable {
    params: FiniteSet,
    x_set: FiniteSet,
    y_set: FiniteSet,
    /// `labels[θ][x]` is the index of `H(θ, x)` in `y_set`.
    labels: Vec<Vec<usize>>,
}

impl HypothesisTable {
    pub fn new(hyp: &Relation) -> Result<Self> {
        if hyp.arity() != 3 {
            return Err(Error::ArityMismatch {
                relation: hyp.name().to_owned(),
                expected: 3,
                found: hyp.arity(),
            });
        }
        let f = is_functional(hyp, &[0, 1], &[2])?;
        if !f.functional {
            return Err(Error::NotFunctional {
                relation: hyp.name().to_owned(),
            });
        }
        if !f.total {
            return Err(Error::NotTotal {
                relation: hyp.name().to_owned(),
            });
        }
        let [params, x_set, y_set] = [0, 1, 2].map(|i| hyp.components()[i].clone());
        let mut labels = vec![vec![0usize; x_set.len()]; params.len()];
        for t in hyp.tuples() {
            let (ti, xi, yi) = (
                params.index_of(&t[0]).expect("typed"),
                x_set.index_of(&t[1]).expect("typed"),
                y_set.index_of(&t[2]).expect("typed"),
            );
            labels[ti][xi] = yi;
        }
        Ok(HypothesisTable {
            params,
            x_set,
            y_set,
            labels,
        })
    }

    pub fn params(&self) -> &FiniteSet {
        &self.params
    }

    pub fn x_set(&self) -> &FiniteSet {
        &self.x_set
    }

    pub fn y_set(&self) -> &FiniteSet {
        &self.y_set
    }

    /// Label indices of hypothesis `theta_index` over all of `X`.
    pub fn labeling(&self, theta_index: usize) -> &[usize] {
        &self.labels[theta_index]
    }

    /// Number of distinct functions `X → Y` among the hypotheses.
    pub fn distinct_count(&self) -> usize {
        self.labels.iter().collect::<std::collections::BTreeSet<_>>().len()
    }

    pub fn label_index(&self, theta_index: usize, x_index: usize) -> usize {
        self.labels[theta_index][x_index]
    }

    pub fn apply(&self, theta: &Atom, x: &Atom) -> Option<&Atom> {
        let ti = self.params.index_of(theta)?;
        let xi = self.x_set.index_of(x)?;
        Some(&self.y_set.elements()[self.labels[ti][xi]])
    }

    /// Positions in `X` of the given elements, rejecting strangers.
    pub fn x_indices(&self, xs: &[Atom]) -> Result<Vec<usize>> {
        xs.iter()
            .map(|x| {
                self.x_set.index_of(x).ok_or_else(|| Error::ElementNotInComponent {
                    relation: "sample".to_owned(),
                    position: 1,
                    component: self.x_set.name().to_owned(),
                    element: x.clone(),
                })
            })
            .collect()
    }
}
