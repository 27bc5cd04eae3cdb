use serde::Serialize;

use crate::error::{Error, Result};

/// Empirical constant `max lhs/shape` and where it is attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FittedConstant {
    pub value: f64,
    pub index: usize,
}

/// `Ĉ = max_i lhs_i / shape_i` over `(lhs, shape)` pairs.
pub fn fit_constant(samples: &[(f64, f64)]) -> Result<FittedConstant> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut best = FittedConstant {
        value: f64::NEG_INFINITY,
        index: 0,
    };
    for (i, &(lhs, shape)) in samples.iter().enumerate() {
        if !(shape > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "shape {shape} at index {i} is not positive"
            )));
        }
        let r = lhs / shape;
        if r > best.value {
            best = FittedConstant { value: r, index: i };
        }
    }
    Ok(best)
}

/// `max/min` of positive values; infinite if any is not positive.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let eps = [1e-3, 1e-2, 0.1];
        let s: Vec<(f64, f64)> = eps
            .iter()
            .map(|e: &f64| (2.0 * e.sqrt(), e.sqrt()))
            .collect();
        assert!((fit_constant(&s).unwrap().value - 2.0).abs() < 1e-15);
        assert_eq!(fit_constant(&[(3.0, 2.0)]).unwrap().value, 1.5);
        let c = fit_constant(&[(1.0, 1.0), (9.0, 1.0), (1.1, 1.0)]).unwrap();
        assert_eq!(c.index, 1);
        assert_eq!(fit_constant(&[]).unwrap_err(), Error::EmptyInput);
        assert_eq!(spread(&[1.0, 3.0, 2.0]), 3.0);
    }
}
