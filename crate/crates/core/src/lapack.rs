//! Thin shim over LAPACK's dense nonsymmetric complex eigensolver (zgeev),
//! used by the Birman–Schwinger cross-check.
//!
//! Only eigenvalues are requested. Because the eigenvalues of a matrix and
//! of its transpose coincide, the row-major input can be handed to the
//! column-major routine without transposition.

use num_complex::Complex64;
use std::sync::Once;
use thiserror::Error;

/// Dense eigensolver failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    /// The QR iteration inside zgeev did not converge.
    #[error("zgeev failed (info = {info})")]
    Lapack { info: i32 },
}

static PIN_THREADS: Once = Once::new();

/// Reproducibility guard: multi-threaded BLAS reductions reorder floating
/// point sums, so byte-identical outputs require a single thread. Set the
/// knobs before the first LAPACK call of the process.
fn pin_single_thread() {
    PIN_THREADS.call_once(|| {
        std::env::set_var("OPENBLAS_NUM_THREADS", "1");
        std::env::set_var("OMP_NUM_THREADS", "1");
    });
}

/// Eigenvalues of a dense complex n×n matrix (row-major slice of length n²).
pub fn eigenvalues(matrix: &[Complex64], n: usize) -> Result<Vec<Complex64>, EigenError> {
    assert_eq!(matrix.len(), n * n, "matrix buffer must be n*n");
    pin_single_thread();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = matrix.to_vec(); // zgeev destroys its input
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let nn = n as i32;
    let lwork = (4 * n).max(1) as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info: i32 = 0;
    let one = 1i32;
    unsafe {
        lapack_sys::zgeev_(
            b"N".as_ptr() as *const _,
            b"N".as_ptr() as *const _,
            &nn,
            a.as_mut_ptr() as *mut _,
            &nn,
            w.as_mut_ptr() as *mut _,
            std::ptr::null_mut(),
            &one,
            std::ptr::null_mut(),
            &one,
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info == 0 {
        Ok(w)
    } else {
        Err(EigenError::Lapack { info })
    }
}
