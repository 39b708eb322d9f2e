fn main() {
    // The dense nonsymmetric eigensolver calls LAPACK's zgeev through lapack-sys,
    // which declares the symbols but links nothing. Default to the system OpenBLAS
    // (ships the full LAPACK symbol set); override with e.g. WCLAB_LAPACK_LIB=lapack
    // on systems that split BLAS and LAPACK.
    let lib = std::env::var("WCLAB_LAPACK_LIB").unwrap_or_else(|_| "openblas".to_string());
    println!("cargo:rerun-if-env-changed=WCLAB_LAPACK_LIB");
    println!("cargo:rustc-link-lib=dylib={lib}");
}
