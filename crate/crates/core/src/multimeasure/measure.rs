use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::density1d::{PiecewiseDensity1D, MASS_TOL};
use crate::error::{Error, Result};

use super::ConvexBody;

/// Points per counter-partitioned chunk. Chunk `c` draws from the ChaCha
/// stream `c` of the seed, so output does not depend on the thread count.
pub const CHUNK: usize = 4096;

/// Smallest rejection acceptance rate before a body counts as too thin.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    Product(Vec<PiecewiseDensity1D>),
    UniformBody(ConvexBody),
}

/// Probability measure on `ℝⁿ` that can be sampled exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleableMeasureND {
    kind: MeasureKind,
    /// Concavity class `s`, metadata only.
    concavity: Option<f64>,
}

/// Seeded generator for chunk `chunk`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

impl SampleableMeasureND {
    /// Product of probability densities, one per coordinate.
    pub fn product(factors: Vec<PiecewiseDensity1D>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyInput);
        }
        for f in &factors {
            f.check_nonnegative()?;
            let mass = f.mass();
            if (mass - 1.0).abs() > MASS_TOL {
                return Err(Error::Unnormalized { mass });
            }
        }
        Ok(Self {
            kind: MeasureKind::Product(factors),
            concavity: None,
        })
    }

    /// Uniform measure on the unit cube `Qⁿ = [-½, ½]ⁿ`, stored as a product.
    pub fn unit_cube(n: usize) -> Self {
        let u = PiecewiseDensity1D::uniform(-0.5, 0.5).expect("nondegenerate interval");
        Self {
            kind: MeasureKind::Product(vec![u; n]),
            concavity: Some(1.0 / n as f64),
        }
    }

    /// Uniform probability measure on a convex body; tagged `s = 1/n`.
    pub fn uniform_body(body: ConvexBody) -> Result<Self> {
        body.validate()?;
        let n = body.dim();
        Ok(Self {
            kind: MeasureKind::UniformBody(body),
            concavity: Some(1.0 / n as f64),
        })
    }

    pub fn with_concavity(mut self, s: Option<f64>) -> Self {
        self.concavity = s;
        self
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn concavity(&self) -> Option<f64> {
        self.concavity
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            MeasureKind::Product(f) => f.len(),
            MeasureKind::UniformBody(b) => b.dim(),
        }
    }

    pub fn factors(&self) -> Option<&[PiecewiseDensity1D]> {
        match &self.kind {
            MeasureKind::Product(f) => Some(f),
            MeasureKind::UniformBody(_) => None,
        }
    }

    /// Exact `E[X_k^j]` for product measures.
    pub fn moment(&self, k: usize, j: u32) -> Option<f64> {
        let f = &self.factors()?[k];
        Some(
            f.pieces()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let q = p * &crate::poly::Polynomial1D::monomial(1.0, j as usize);
                    q.integral(f.breaks()[i], f.breaks()[i + 1])
                })
                .sum(),
        )
    }

    /// Rejection acceptance rate of the body in its bounding box: exact when
    /// the volume is known, otherwise a pilot estimate.
    pub fn acceptance(&self, seed: u64) -> f64 {
        match &self.kind {
            MeasureKind::Product(_) => 1.0,
            MeasureKind::UniformBody(body) => match body.volume() {
                Some(v) => v / body.bbox_volume(),
                None => {
                    let draws = 2_000_000;
                    let mut rng = chunk_rng(seed, u64::MAX);
                    let bbox = body.bounding_box();
                    let mut x = vec![0.0; bbox.len()];
                    let hits = (0..draws)
                        .filter(|_| {
                            fill_box(&mut rng, &bbox, &mut x);
                            body.contains(&x)
                        })
                        .count();
                    hits as f64 / draws as f64
                }
            },
        }
    }

    fn check_thin(&self, seed: u64) -> Result<()> {
        let acceptance = self.acceptance(seed);
        if acceptance < MIN_ACCEPTANCE {
            return Err(Error::BodyTooThin { acceptance });
        }
        Ok(())
    }

    /// Fill `x` with one draw.
    fn draw(&self, rng: &mut ChaCha8Rng, bbox: &[(f64, f64)], x: &mut [f64]) {
        match &self.kind {
            MeasureKind::Product(factors) => {
                for (xi, f) in x.iter_mut().zip(factors) {
                    *xi = f.quantile(rng.random::<f64>());
                }
            }
            MeasureKind::UniformBody(body) => loop {
                fill_box(rng, bbox, x);
                if body.contains(x) {
                    break;
                }
            },
        }
    }

    /// Apply `map` to `count` i.i.d. draws, in draw order. Chunks run in
    /// parallel; chunk `c` always covers draws `c·CHUNK..` from stream `c`.
    pub fn sample_map<T, F>(&self, count: usize, seed: u64, map: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[f64]) -> T + Sync,
    {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "sample count must be at least 1".into(),
            ));
        }
        self.check_thin(seed)?;
        let n = self.dim();
        let bbox = match &self.kind {
            MeasureKind::UniformBody(b) => b.bounding_box(),
            MeasureKind::Product(_) => Vec::new(),
        };
        let chunks = count.div_ceil(CHUNK);
        let parts: Vec<Vec<T>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK.min(count - c * CHUNK);
                let mut rng = chunk_rng(seed, c as u64);
                let mut x = vec![0.0; n];
                (0..len)
                    .map(|_| {
                        self.draw(&mut rng, &bbox, &mut x);
                        map(&x)
                    })
                    .collect()
            })
            .collect();
        Ok(parts.into_iter().flatten().collect())
    }

    /// `count` draws as a flat row-major array of length `count · n`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        Ok(self
            .sample_map(count, seed, |x| x.to_vec())?
            .into_iter()
            .flatten()
            .collect())
    }
}

fn fill_box(rng: &mut ChaCha8Rng, bbox: &[(f64, f64)], x: &mut [f64]) {
    for (xi, &(a, b)) in x.iter_mut().zip(bbox) {
        *xi = a + (b - a) * rng.random::<f64>();
    }
}

/// Fraction of `draws` bounding-box points that land in the body, with its
/// binomial standard error.
pub fn acceptance_estimate(body: &ConvexBody, draws: usize, seed: u64) -> (f64, f64) {
    let bbox = body.bounding_box();
    let chunks = draws.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(draws - c * CHUNK);
            let mut rng = chunk_rng(seed, c as u64);
            let mut x = vec![0.0; bbox.len()];
            (0..len)
                .filter(|_| {
                    fill_box(&mut rng, &bbox, &mut x);
                    body.contains(&x)
                })
                .count()
        })
        .sum();
    let p = hits as f64 / draws as f64;
    (p, (p * (1.0 - p) / draws as f64).sqrt())
}

/// `sup_x |F_n(x) − F(x)|` for a sorted sample.
pub fn kolmogorov_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Sample mean and its standard error.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_chunked() {
        let m = SampleableMeasureND::unit_cube(3);
        let a = m.sample(10_000, 7).unwrap();
        let b = m.sample(10_000, 7).unwrap();
        assert_eq!(a, b);
        let prefix = m.sample(5_000, 7).unwrap();
        assert_eq!(&a[..prefix.len()], &prefix[..]);
        assert!(a.iter().all(|v| (-0.5..=0.5).contains(v)));
        assert_ne!(a, m.sample(10_000, 8).unwrap());
    }

    #[test]
    fn ball_samples_inside() {
        let ball = ConvexBody::Ball {
            center: vec![0.0; 3],
            radius: 1.0,
        };
        let m = SampleableMeasureND::uniform_body(ball.clone()).unwrap();
        let pts = m.sample(2000, 1).unwrap();
        assert!(pts.chunks(3).all(|x| ball.contains(x)));
        assert_eq!(m.concavity(), Some(1.0 / 3.0));
    }

    #[test]
    fn thin_body_rejected() {
        let thin = ConvexBody::HPolytope {
            rows: vec![vec![1.0, 0.0], vec![-1.0, 0.0]],
            offsets: vec![1e-9, 1e-9],
            bbox: vec![(-1.0, 1.0), (-1.0, 1.0)],
        };
        let m = SampleableMeasureND::uniform_body(thin).unwrap();
        assert!(matches!(m.sample(10, 0), Err(Error::BodyTooThin { .. })));
    }

    #[test]
    fn product_moments() {
        let m = SampleableMeasureND::unit_cube(2);
        assert!((m.moment(0, 2).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(m.moment(1, 3).unwrap(), 0.0);
    }
}
