#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Maximum,
    Minimum,
}

/// Interior indices that are strict local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

/// Interior indices that are strict local minima.
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
        .collect()
}

/// Closest strict extremum of the requested kind within `tol` of `target`.
pub fn extremum_near(abscissa: &[f64], values: &[f64], target: f64, tol: f64, kind: Extremum) -> Option<usize> {
    let candidates = match kind {
        Extremum::Maximum => local_maxima(values),
        Extremum::Minimum => local_minima(values),
    };
    candidates
        .into_iter()
        .filter(|&i| (abscissa[i] - target).abs() <= tol)
        .min_by(|&i, &j| {
            (abscissa[i] - target)
                .abs()
                .partial_cmp(&(abscissa[j] - target).abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
}
