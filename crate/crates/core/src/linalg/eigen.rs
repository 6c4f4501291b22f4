use super::DenseMatrix;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Cyclic Jacobi rotations on the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input with every
/// eigenvalue doubled. Intended for density-matrix diagnostics (positivity,
/// trace distance) on the small matrices this crate produces.
pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.rows();
    let size = 2 * n;
    let mut a = vec![0.0; size * size];
    for r in 0..n {
        for c in 0..n {
            let z = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            a[r * size + c] = z.re;
            a[(r + n) * size + c + n] = z.re;
            a[(r + n) * size + c] = z.im;
            a[r * size + c + n] = -z.im;
        }
    }

    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..size)
            .flat_map(|p| (p + 1..size).map(move |q| (p, q)))
            .map(|(p, q)| a[p * size + q].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..size {
            for q in p + 1..size {
                let apq = a[p * size + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * size + p];
                let aqq = a[q * size + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..size {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * size + p];
                    let akq = a[k * size + q];
                    let new_kp = cs * akp - sn * akq;
                    let new_kq = sn * akp + cs * akq;
                    a[k * size + p] = new_kp;
                    a[p * size + k] = new_kp;
                    a[k * size + q] = new_kq;
                    a[q * size + k] = new_kq;
                }
                a[p * size + p] = app - t * apq;
                a[q * size + q] = aqq + t * apq;
                a[p * size + q] = 0.0;
                a[q * size + p] = 0.0;
            }
        }
    }

    let mut diag: Vec<f64> = (0..size).map(|i| a[i * size + i]).collect();
    diag.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    diag.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

/// Trace distance `||a - b||_1 / 2` between Hermitian matrices.
pub fn trace_distance(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let diff = DenseMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)] - b[(r, c)]);
    0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn pauli_y_spectrum() {
        let m = DenseMatrix::from_row_major(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-13 && (ev[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn trace_is_sum_of_eigenvalues() {
        let m = DenseMatrix::from_fn(5, 5, |r, c| {
            let x = (r * 7 + c * 3) as f64 * 0.1;
            if r == c {
                C64::new(x, 0.0)
            } else if r < c {
                C64::new(x.sin(), x.cos())
            } else {
                C64::new(((c * 7 + r * 3) as f64 * 0.1).sin(), -((c * 7 + r * 3) as f64 * 0.1).cos())
            }
        });
        let ev = hermitian_eigenvalues(&m);
        assert!((ev.iter().sum::<f64>() - m.trace().re).abs() < 1e-12);
        let sq: f64 = ev.iter().map(|x| x * x).sum();
        assert!((sq - m.frobenius_norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_pure_states_are_maximally_distant() {
        let a = DenseMatrix::from_fn(2, 2, |r, c| C64::new(if r == 0 && c == 0 { 1.0 } else { 0.0 }, 0.0));
        let b = DenseMatrix::from_fn(2, 2, |r, c| C64::new(if r == 1 && c == 1 { 1.0 } else { 0.0 }, 0.0));
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-14);
    }
}
