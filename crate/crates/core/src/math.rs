//! Shared numerics: deterministic summation and a small symmetric
//! eigensolver used for spectral quantities on density matrices.

use num_complex::Complex;

use crate::scalar::Scalar;

const PAIRWISE_LEAF: usize = 16;

/// Pairwise (cascade) sum of real values. Error grows with log(n) instead of
/// n, which keeps exhaustive phase-average comparisons under the 1e-10 gates.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Pairwise sum of complex values.
pub fn pairwise_sum_complex<T: Scalar>(xs: &[Complex<T>]) -> Complex<T> {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
    }
}

/// Compensated accumulator for long weighted reductions whose term count is
/// not known up front (channel averages over every phase string).
#[derive(Clone, Debug)]
pub struct KahanSum<T: Scalar> {
    sum: T,
    carry: T,
}

impl<T: Scalar> KahanSum<T> {
    pub fn new() -> Self {
        KahanSum {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum
    }
}

impl<T: Scalar> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Eigenvalues of a real symmetric matrix (row-major, `dim * dim` entries) by
/// the cyclic Jacobi method. The matrices this crate feeds in are tiny, and
/// nearly diagonal in the recovery-check hot path, so the threshold test
/// usually exits before any rotation work.
pub fn symmetric_eigenvalues<T: Scalar>(mut a: Vec<T>, dim: usize) -> Vec<T> {
    assert_eq!(a.len(), dim * dim, "matrix storage must be dim*dim");
    if dim == 0 {
        return Vec::new();
    }
    let idx = |r: usize, c: usize| r * dim + c;

    let mut frob = T::zero();
    for &v in &a {
        frob = frob + v * v;
    }
    let frob = frob.sqrt();
    let tol = T::epsilon() * T::from_count(dim) * (frob + T::one());

    for _sweep in 0..50 {
        let mut off = T::zero();
        for r in 0..dim {
            for c in (r + 1)..dim {
                off = off + a[idx(r, c)] * a[idx(r, c)];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[idx(p, q)];
                if apq.abs() <= tol / T::from_count(dim * dim) {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (T::from_count(2) * apq);
                let t = {
                    let s = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for k in 0..dim {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    (0..dim).map(|r| a[idx(r, r)]).collect()
}

/// Eigenvalues of a complex Hermitian matrix (row-major) via the real
/// symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is the
/// Hermitian spectrum with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Scalar>(h: &[Complex<T>], dim: usize) -> Vec<T> {
    assert_eq!(h.len(), dim * dim, "matrix storage must be dim*dim");
    let big = 2 * dim;
    let mut emb = vec![T::zero(); big * big];
    for r in 0..dim {
        for c in 0..dim {
            let v = h[r * dim + c];
            emb[r * big + c] = v.re;
            emb[(r + dim) * big + (c + dim)] = v.re;
            emb[r * big + (c + dim)] = -v.im;
            emb[(r + dim) * big + c] = v.im;
        }
    }
    let mut eigs = symmetric_eigenvalues(emb, big);
    // Every Hermitian eigenvalue shows up twice; sorting and taking every
    // second entry collapses the duplication.
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs.into_iter().step_by(2).collect()
}
