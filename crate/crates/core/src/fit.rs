//! Least-squares line fitting for growth-rate estimation.

/// Slope/intercept/r² of an ordinary least-squares line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits y = slope·x + intercept. A flat series (zero variance in y) is a
/// perfect fit, reported as r² = 1.
pub fn fit_line(points: &[(f64, f64)]) -> LineFit {
    assert!(points.len() >= 2, "need at least two points to fit a line");
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy < 1e-20 {
        1.0
    } else {
        let explained = slope * sxy;
        (explained / syy).clamp(0.0, 1.0)
    };
    LineFit {
        slope,
        intercept,
        r_squared,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let pts: alloc::vec::Vec<(f64, f64)> =
            (0..10).map(|i| (i as f64, 2.5 * i as f64 - 1.0)).collect();
        let f = fit_line(&pts);
        assert!((f.slope - 2.5).abs() < 1e-12);
        assert!((f.intercept + 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_series_has_zero_slope_and_perfect_r2() {
        let pts = [(0.0, 3.0), (1.0, 3.0), (2.0, 3.0)];
        let f = fit_line(&pts);
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }
}
