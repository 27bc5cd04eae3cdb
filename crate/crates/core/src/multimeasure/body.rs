use crate::error::{Error, Result};

/// Convex body in `ℝⁿ` with a bounding box for rejection sampling.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Box {
        intervals: Vec<(f64, f64)>,
    },
    /// `n + 1` affinely independent vertices.
    Simplex {
        vertices: Vec<Vec<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{x : A x ≤ b}` together with a box that contains it.
    HPolytope {
        rows: Vec<Vec<f64>>,
        offsets: Vec<f64>,
        bbox: Vec<(f64, f64)>,
    },
}

impl ConvexBody {
    pub fn cube(n: usize) -> Self {
        Self::Box {
            intervals: vec![(-0.5, 0.5); n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::InvalidArgument("body of dimension 0".into()));
        }
        match self {
            Self::Box { intervals } => {
                if let Some(&(a, b)) = intervals.iter().find(|(a, b)| !(a < b)) {
                    return Err(Error::DegenerateInterval { a, b });
                }
            }
            Self::Simplex { vertices } => {
                if vertices.len() != n + 1 {
                    return Err(Error::InvalidArgument(format!(
                        "simplex in dimension {n} needs {} vertices, got {}",
                        n + 1,
                        vertices.len()
                    )));
                }
                if let Some(v) = vertices.iter().find(|v| v.len() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: v.len(),
                    });
                }
                if self.volume().unwrap_or(0.0) <= 0.0 {
                    return Err(Error::InvalidArgument("simplex has empty interior".into()));
                }
            }
            Self::Ball { radius, .. } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
            }
            Self::HPolytope {
                rows,
                offsets,
                bbox,
            } => {
                if rows.len() != offsets.len() || rows.is_empty() {
                    return Err(Error::InvalidArgument(
                        "polytope needs matching nonempty A and b".into(),
                    ));
                }
                if let Some(r) = rows.iter().find(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: r.len(),
                    });
                }
                if let Some(&(a, b)) = bbox.iter().find(|(a, b)| !(a < b)) {
                    return Err(Error::DegenerateInterval { a, b });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Box { intervals } => intervals.len(),
            Self::Simplex { vertices } => vertices.first().map_or(0, Vec::len),
            Self::Ball { center, .. } => center.len(),
            Self::HPolytope { bbox, .. } => bbox.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Self::Box { intervals } => intervals
                .iter()
                .zip(x)
                .all(|(&(a, b), &v)| a <= v && v <= b),
            Self::Ball { center, radius } => {
                center
                    .iter()
                    .zip(x)
                    .map(|(c, v)| (v - c) * (v - c))
                    .sum::<f64>()
                    <= radius * radius
            }
            Self::HPolytope { rows, offsets, .. } => rows
                .iter()
                .zip(offsets)
                .all(|(r, &b)| r.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() <= b),
            Self::Simplex { vertices } => match barycentric(vertices, x) {
                Some(l) => l.iter().all(|&v| v >= -1e-14),
                None => false,
            },
        }
    }

    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        match self {
            Self::Box { intervals } => intervals.clone(),
            Self::Ball { center, radius } => {
                center.iter().map(|c| (c - radius, c + radius)).collect()
            }
            Self::HPolytope { bbox, .. } => bbox.clone(),
            Self::Simplex { vertices } => (0..self.dim())
                .map(|k| {
                    vertices
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                            (lo.min(v[k]), hi.max(v[k]))
                        })
                })
                .collect(),
        }
    }

    /// Exact volume for boxes, simplices and balls.
    pub fn volume(&self) -> Option<f64> {
        let n = self.dim();
        match self {
            Self::Box { intervals } => Some(intervals.iter().map(|(a, b)| b - a).product()),
            Self::Ball { radius, .. } => Some(unit_ball_volume(n) * radius.powi(n as i32)),
            Self::Simplex { vertices } => {
                let m: Vec<Vec<f64>> = vertices[1..]
                    .iter()
                    .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
                    .collect();
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                Some(determinant(m).abs() / fact)
            }
            Self::HPolytope { .. } => None,
        }
    }

    pub fn bbox_volume(&self) -> f64 {
        self.bounding_box().iter().map(|(a, b)| b - a).product()
    }

    /// The body scaled about its bounding-box center to unit volume.
    pub fn rescaled_to_unit_volume(&self) -> Result<Self> {
        let vol = self.volume().ok_or_else(|| {
            Error::Unsupported("unit-volume rescaling needs an exact volume".into())
        })?;
        let n = self.dim();
        let s = vol.powf(-1.0 / n as f64);
        let c: Vec<f64> = self
            .bounding_box()
            .iter()
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let map =
            |x: &[f64]| -> Vec<f64> { x.iter().zip(&c).map(|(v, ck)| ck + s * (v - ck)).collect() };
        Ok(match self {
            Self::Box { intervals } => Self::Box {
                intervals: intervals
                    .iter()
                    .zip(&c)
                    .map(|(&(a, b), ck)| (ck + s * (a - ck), ck + s * (b - ck)))
                    .collect(),
            },
            Self::Ball { center, radius } => Self::Ball {
                center: center.clone(),
                radius: radius * s,
            },
            Self::Simplex { vertices } => Self::Simplex {
                vertices: vertices.iter().map(|v| map(v)).collect(),
            },
            Self::HPolytope { .. } => unreachable!("volume() is None for polytopes"),
        })
    }
}

/// `π^{n/2} / Γ(n/2 + 1)` via the two-step recursion `V_n = 2π/n · V_{n−2}`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("nonempty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// Barycentric coordinates of `x` with respect to the simplex vertices.
fn barycentric(vertices: &[Vec<f64>], x: &[f64]) -> Option<Vec<f64>> {
    let n = x.len();
    // Solve [v_1 − v_0, …, v_n − v_0] λ = x − v_0 by Gaussian elimination.
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut row: Vec<f64> = (1..=n).map(|j| vertices[j][r] - vertices[0][r]).collect();
            row.push(x[r] - vertices[0][r]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(pivot, col);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let lam: Vec<f64> = (0..n).map(|r| a[r][n] / a[r][r]).collect();
    let l0 = 1.0 - lam.iter().sum::<f64>();
    let mut out = vec![l0];
    out.extend(lam);
    Some(out)
}
