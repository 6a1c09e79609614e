//! Operators `B: R^d → R^d`.
//!
//! Composition applies right to left, so `compose(b1, b2)` maps `y` to
//! `b1(b2(y))`. Powers are lazy: `power(b, n)` applies `b` repeatedly, which
//! also works for nonlinear maps; `power(b, 0)` is the identity.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::{FuzzyError, Point, Result};

type MapFn = dyn Fn(&Point) -> Vec<f64> + Send + Sync;

#[derive(Clone)]
pub enum OperatorKind {
    /// Works in every dimension.
    Identity,
    /// Sends every point to the origin of its space.
    Zero,
    LinearMatrix(DMatrix<f64>),
    Affine {
        matrix: DMatrix<f64>,
        offset: Vec<f64>,
    },
    General {
        dim: Option<usize>,
        map: Arc<MapFn>,
    },
    /// Applied last-to-first.
    Composition(Vec<Operator>),
    Power {
        base: Box<Operator>,
        n: u32,
    },
    Scaled {
        factor: f64,
        inner: Box<Operator>,
    },
    /// Pointwise sum `y ↦ a(y) + b(y)`.
    Sum(Box<Operator>, Box<Operator>),
    /// Pointwise difference `y ↦ a(y) - b(y)`.
    Difference(Box<Operator>, Box<Operator>),
}

impl fmt::Debug for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::Identity => f.write_str("Identity"),
            OperatorKind::Zero => f.write_str("Zero"),
            OperatorKind::LinearMatrix(m) => f.debug_tuple("LinearMatrix").field(m).finish(),
            OperatorKind::Affine { matrix, offset } => f
                .debug_struct("Affine")
                .field("matrix", matrix)
                .field("offset", offset)
                .finish(),
            OperatorKind::General { dim, .. } => {
                f.debug_struct("General").field("dim", dim).finish_non_exhaustive()
            }
            OperatorKind::Composition(ops) => f.debug_tuple("Composition").field(ops).finish(),
            OperatorKind::Power { base, n } => f
                .debug_struct("Power")
                .field("base", base)
                .field("n", n)
                .finish(),
            OperatorKind::Scaled { factor, inner } => f
                .debug_struct("Scaled")
                .field("factor", factor)
                .field("inner", inner)
                .finish(),
            OperatorKind::Sum(a, b) => f.debug_tuple("Sum").field(a).field(b).finish(),
            OperatorKind::Difference(a, b) => {
                f.debug_tuple("Difference").field(a).field(b).finish()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Operator {
    kind: OperatorKind,
    label: String,
}

fn square_dim(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(FuzzyError::parse(
            "matrix",
            format!("expected a nonempty square matrix, got {}x{}", m.nrows(), m.ncols()),
        ));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(FuzzyError::parse("matrix", "entries must be finite"));
    }
    Ok(m.nrows())
}

impl Operator {
    pub fn identity() -> Self {
        Operator {
            kind: OperatorKind::Identity,
            label: "I".into(),
        }
    }

    pub fn zero() -> Self {
        Operator {
            kind: OperatorKind::Zero,
            label: "0".into(),
        }
    }

    pub fn matrix(m: DMatrix<f64>) -> Result<Self> {
        square_dim(&m)?;
        Ok(Operator {
            label: format!("matrix{}x{}", m.nrows(), m.ncols()),
            kind: OperatorKind::LinearMatrix(m),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(FuzzyError::parse("rows", "matrix rows must form a square"));
        }
        Operator::matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let m = DMatrix::from_diagonal(&DVector::from_column_slice(entries));
        let label = format!(
            "diag({})",
            entries.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
        );
        Operator::matrix(m).map(|op| op.with_label(label))
    }

    /// Counter-clockwise planar rotation.
    pub fn rotation(angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        Operator::from_rows(&[vec![c, -s], vec![s, c]])
            .map(|op| op.with_label(format!("rot({angle})")))
    }

    /// Coordinate projection keeping only `axis` in `R^dim`.
    pub fn projection(axis: usize, dim: usize) -> Result<Self> {
        if axis >= dim {
            return Err(FuzzyError::parse(
                "axis",
                format!("axis {axis} out of range for dimension {dim}"),
            ));
        }
        let entries: Vec<f64> = (0..dim).map(|i| if i == axis { 1.0 } else { 0.0 }).collect();
        Operator::diag(&entries).map(|op| op.with_label(format!("proj({axis})")))
    }

    pub fn affine(m: DMatrix<f64>, offset: Vec<f64>) -> Result<Self> {
        let d = square_dim(&m)?;
        if offset.len() != d {
            return Err(FuzzyError::DimensionMismatch {
                expected: d,
                found: offset.len(),
            });
        }
        Ok(Operator {
            kind: OperatorKind::Affine { matrix: m, offset },
            label: format!("affine{d}"),
        })
    }

    /// An arbitrary pure map; `dim` restricts the points it accepts.
    pub fn general(
        label: impl Into<String>,
        dim: Option<usize>,
        map: impl Fn(&Point) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Operator {
            kind: OperatorKind::General {
                dim,
                map: Arc::new(map),
            },
            label: label.into(),
        }
    }

    /// Right-to-left composition of `ops`; the empty list is the identity.
    pub fn composition(ops: Vec<Operator>) -> Result<Self> {
        check_dims(ops.iter())?;
        let label = if ops.is_empty() {
            "I".to_string()
        } else {
            ops.iter().map(|o| o.label.as_str()).collect::<Vec<_>>().join("∘")
        };
        Ok(Operator {
            kind: OperatorKind::Composition(ops),
            label,
        })
    }

    pub fn sum(a: Operator, b: Operator) -> Result<Self> {
        check_dims([&a, &b].into_iter())?;
        Ok(Operator {
            label: format!("({}+{})", a.label, b.label),
            kind: OperatorKind::Sum(Box::new(a), Box::new(b)),
        })
    }

    pub fn difference(a: Operator, b: Operator) -> Result<Self> {
        check_dims([&a, &b].into_iter())?;
        Ok(Operator {
            label: format!("({}-{})", a.label, b.label),
            kind: OperatorKind::Difference(Box::new(a), Box::new(b)),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// The dimension the operator is pinned to, if any.
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            OperatorKind::Identity | OperatorKind::Zero => None,
            OperatorKind::LinearMatrix(m) | OperatorKind::Affine { matrix: m, .. } => {
                Some(m.nrows())
            }
            OperatorKind::General { dim, .. } => *dim,
            OperatorKind::Composition(ops) => ops.iter().find_map(Operator::dim),
            OperatorKind::Power { base, .. } | OperatorKind::Scaled { inner: base, .. } => {
                base.dim()
            }
            OperatorKind::Sum(a, b) | OperatorKind::Difference(a, b) => a.dim().or(b.dim()),
        }
    }

    /// Structural linearity: built only from matrices, identity, zero,
    /// zero-offset affine maps, and their compositions, powers, scalings,
    /// sums and differences.
    pub fn is_linear(&self) -> bool {
        match &self.kind {
            OperatorKind::Identity | OperatorKind::Zero | OperatorKind::LinearMatrix(_) => true,
            OperatorKind::Affine { offset, .. } => offset.iter().all(|v| *v == 0.0),
            OperatorKind::General { .. } => false,
            OperatorKind::Composition(ops) => ops.iter().all(Operator::is_linear),
            OperatorKind::Power { base, .. } | OperatorKind::Scaled { inner: base, .. } => {
                base.is_linear()
            }
            OperatorKind::Sum(a, b) | OperatorKind::Difference(a, b) => {
                a.is_linear() && b.is_linear()
            }
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        if let Some(d) = self.dim() {
            p.ensure_dim(d)?;
        }
        match &self.kind {
            OperatorKind::Identity => Ok(p.clone()),
            OperatorKind::Zero => Ok(Point::zeros(p.dim())),
            OperatorKind::LinearMatrix(m) => Point::new(mat_vec(m, p.coords())),
            OperatorKind::Affine { matrix, offset } => {
                let mut v = mat_vec(matrix, p.coords());
                v.iter_mut().zip(offset).for_each(|(a, b)| *a += b);
                Point::new(v)
            }
            OperatorKind::General { map, .. } => {
                let out = Point::new(map(p))?;
                out.ensure_dim(p.dim())?;
                Ok(out)
            }
            OperatorKind::Composition(ops) => {
                let mut cur = p.clone();
                for op in ops.iter().rev() {
                    cur = op.apply(&cur)?;
                }
                Ok(cur)
            }
            OperatorKind::Power { base, n } => {
                let mut cur = p.clone();
                for _ in 0..*n {
                    cur = base.apply(&cur)?;
                }
                Ok(cur)
            }
            OperatorKind::Scaled { factor, inner } => inner.apply(p)?.scaled(*factor),
            OperatorKind::Sum(a, b) => a.apply(p)?.zip_with(&b.apply(p)?, |x, y| x + y),
            OperatorKind::Difference(a, b) => a.apply(p)?.zip_with(&b.apply(p)?, |x, y| x - y),
        }
    }
}

fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let out = m * DVector::from_column_slice(v);
    out.as_slice().to_vec()
}

fn check_dims<'a>(ops: impl Iterator<Item = &'a Operator>) -> Result<()> {
    let mut seen: Option<usize> = None;
    for op in ops {
        if let Some(d) = op.dim() {
            match seen {
                Some(s) if s != d => {
                    return Err(FuzzyError::DimensionMismatch {
                        expected: s,
                        found: d,
                    })
                }
                _ => seen = Some(d),
            }
        }
    }
    Ok(())
}

pub fn apply(op: &Operator, p: &Point) -> Result<Point> {
    op.apply(p)
}

/// `op` applied `n` times; `n = 0` gives the identity.
pub fn power(op: &Operator, n: u32) -> Operator {
    Operator {
        label: format!("{}^{n}", op.label),
        kind: OperatorKind::Power {
            base: Box::new(op.clone()),
            n,
        },
    }
}

/// `y ↦ a·op(y)` for a linear `op` and `a > 0`.
pub fn scale(op: &Operator, a: f64) -> Result<Operator> {
    if !(a.is_finite() && a > 0.0) {
        return Err(FuzzyError::InvalidParameter {
            name: "a",
            value: a,
            reason: "scale factor must be positive",
        });
    }
    if !op.is_linear() {
        return Err(FuzzyError::NotLinear(op.label.clone()));
    }
    Ok(Operator {
        label: format!("{a}·{}", op.label),
        kind: OperatorKind::Scaled {
            factor: a,
            inner: Box::new(op.clone()),
        },
    })
}

/// `y ↦ outer(inner(y))`.
pub fn compose(outer: &Operator, inner: &Operator) -> Result<Operator> {
    Operator::composition(vec![outer.clone(), inner.clone()])
}
