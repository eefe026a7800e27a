use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// What a [`FieldGrid`] stores at each node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    /// Scalar potential `U`.
    Potential,
    /// Gradient `F = (F0, F1) = (d_t U, d_x U)`.
    Gradient,
}

impl FieldKind {
    pub fn components(&self) -> usize {
        match self {
            FieldKind::Potential => 1,
            FieldKind::Gradient => 2,
        }
    }
}

/// Evaluation nodes: increasing positive heights and nonzero abscissae.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub t: Vec<T>,
    pub x: Vec<T>,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(t: Vec<T>, x: Vec<T>) -> Result<Self> {
        if t.is_empty() || x.is_empty() {
            return Err(Error::DomainError("empty grid".into()));
        }
        if !t.iter().all(|&v| v > T::zero() && v.is_finite()) {
            return Err(Error::DomainError("heights must be positive".into()));
        }
        if !t.windows(2).all(|w| w[1] > w[0]) || !x.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::DomainError("grid nodes must be strictly increasing".into()));
        }
        if x.iter().any(|&v| v == T::zero() || !v.is_finite()) {
            return Err(Error::EvaluationOnInterface);
        }
        Ok(Self { t, x })
    }

    /// `nt` heights evenly spaced on `[t0, t1]` and `nx` cell-centred nodes
    /// on `[x0, x1]` (symmetric intervals with even `nx` avoid `x = 0`).
    pub fn uniform(t0: T, t1: T, nt: usize, x0: T, x1: T, nx: usize) -> Result<Self> {
        if nt == 0 || nx == 0 || !(t1 >= t0) || !(x1 > x0) {
            return Err(Error::DomainError("degenerate grid specification".into()));
        }
        let t = if nt == 1 {
            vec![t0]
        } else {
            let h = (t1 - t0) / T::from_usize(nt - 1).expect("size");
            (0..nt).map(|i| t0 + h * T::from_usize(i).expect("index")).collect()
        };
        let h = (x1 - x0) / T::from_usize(nx).expect("size");
        let x = (0..nx)
            .map(|j| x0 + h * (T::from_usize(j).expect("index") + T::half()))
            .collect();
        Self::new(t, x)
    }

    pub fn len(&self) -> usize {
        self.t.len() * self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Values of a potential or gradient on a [`GridSpec`], row-major in
/// `(t, x, component)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid<T> {
    pub t_levels: Vec<T>,
    pub x_nodes: Vec<T>,
    pub kind: FieldKind,
    pub values: Vec<T>,
}

impl<T: Scalar> FieldGrid<T> {
    pub fn new(t_levels: Vec<T>, x_nodes: Vec<T>, kind: FieldKind, values: Vec<T>) -> Result<Self> {
        GridSpec::new(t_levels.clone(), x_nodes.clone())?;
        if values.len() != t_levels.len() * x_nodes.len() * kind.components() {
            return Err(Error::DomainError("value count does not match the grid".into()));
        }
        Ok(Self {
            t_levels,
            x_nodes,
            kind,
            values,
        })
    }

    /// Evaluate `f(t, x)` at every node in parallel.
    pub fn tabulate<F>(spec: &GridSpec<T>, kind: FieldKind, f: F) -> Result<Self>
    where
        F: Fn(T, T) -> Result<Vec<T>> + Sync,
    {
        let nx = spec.x.len();
        let rows: Vec<Vec<T>> = (0..spec.len())
            .into_par_iter()
            .map(|n| f(spec.t[n / nx], spec.x[n % nx]))
            .collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(spec.len() * kind.components());
        for r in rows {
            if r.len() != kind.components() {
                return Err(Error::DomainError("evaluator returned wrong arity".into()));
            }
            values.extend(r);
        }
        Self::new(spec.t.clone(), spec.x.clone(), kind, values)
    }

    pub fn spec(&self) -> GridSpec<T> {
        GridSpec {
            t: self.t_levels.clone(),
            x: self.x_nodes.clone(),
        }
    }

    /// Components at node `(i, j)` (height index, abscissa index).
    pub fn at(&self, i: usize, j: usize) -> &[T] {
        let c = self.kind.components();
        let n = (i * self.x_nodes.len() + j) * c;
        &self.values[n..n + c]
    }

    /// One component as a `t x x` table.
    pub fn component(&self, c: usize) -> Vec<Vec<T>> {
        (0..self.t_levels.len())
            .map(|i| (0..self.x_nodes.len()).map(|j| self.at(i, j)[c]).collect())
            .collect()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}
