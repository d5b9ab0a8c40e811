use ndarray::Array2;

/// Order in which sorted values fill a row of length `n`: centre first, then
/// alternately one step below and one step above.
fn placement(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    if n % 2 == 1 {
        let c = n / 2;
        out.push(c);
        for d in 1..=c {
            out.push(c - d);
            out.push(c + d);
        }
    } else {
        let c = n / 2;
        for d in 0..c {
            out.push(c - 1 - d);
            out.push(c + d);
        }
    }
    out
}

/// Symmetric decreasing rearrangement in z of each r-row about the midpoint
/// of the z-range, after clamping negative values to zero.
pub fn steiner_symmetrize(phi: &Array2<f64>) -> Array2<f64> {
    let (nz, nr) = phi.dim();
    let order = placement(nz);
    let mut out = Array2::zeros((nz, nr));
    let mut col = vec![0.0; nz];
    for j in 0..nr {
        for i in 0..nz {
            col[i] = phi[[i, j]].max(0.0);
        }
        col.sort_by(|a, b| b.total_cmp(a));
        for (v, &i) in col.iter().zip(&order) {
            out[[i, j]] = *v;
        }
    }
    out
}
