//! Complex floating-point helpers on top of nalgebra.

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;

/// Orthonormal basis (as columns) of the numerical null space of `a`.
///
/// A singular value counts as zero when it is below `rel_tol · max(1, σ_max)`.
pub fn null_space(a: &CMat, rel_tol: f64) -> CMat {
    let (r, c) = a.shape();
    if c == 0 {
        return CMat::zeros(0, 0);
    }
    // pad so that the SVD returns a full right factor
    let padded = if r < c {
        let mut p = CMat::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax.max(1.0);
    let cols: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < cut)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        return CMat::zeros(c, 0);
    }
    CMat::from_columns(&cols)
}

/// Numerical rank.
pub fn rank(a: &CMat, rel_tol: f64) -> usize {
    a.ncols() - null_space(a, rel_tol).ncols()
}

/// Eigenvalues of a square matrix via the complex Schur form.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = a
        .clone()
        .try_schur(1e-15, 100 * n.max(10))
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let t = schur.unpack().1;
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Groups values by single linkage at distance `eps`.
pub fn cluster(values: &[C64], eps: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < eps {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut label, i);
        let g = *root_to_group.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn hermitian_sqrt(p: &CMat) -> CMat {
    let eig = p.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Least-squares solution of `a x = b`.
pub fn least_squares(a: &CMat, b: &CMat) -> Result<CMat> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-12)
        .map_err(|e| Error::Numerical(e.to_string()))
}

/// Largest entry modulus.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = CMat::from_row_slice(2, 3, &[c(1.), c(2.), c(3.), c(2.), c(4.), c(6.)]);
        let n = null_space(&a, 1e-10);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&a * &n)) < 1e-12);
        assert_eq!(rank(&a, 1e-10), 1);
    }

    #[test]
    fn eigenvalues_of_rotation() {
        let a = CMat::from_row_slice(2, 2, &[c(0.), c(-1.), c(1.), c(0.)]);
        let mut ev = eigenvalues(&a).unwrap();
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((ev[0] - C64::new(0., -1.)).norm() < 1e-12);
        assert!((ev[1] - C64::new(0., 1.)).norm() < 1e-12);
    }

    #[test]
    fn clustering_and_sqrt() {
        let v = [c(1.0), c(1.0 + 1e-12), c(2.0)];
        assert_eq!(cluster(&v, 1e-9), vec![vec![0, 1], vec![2]]);
        let p = CMat::from_row_slice(2, 2, &[c(5.), c(4.), c(4.), c(5.)]);
        let s = hermitian_sqrt(&p);
        assert!(max_abs(&(&s * &s - &p)) < 1e-12);
    }
}
