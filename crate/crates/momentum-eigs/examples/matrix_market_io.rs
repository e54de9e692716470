//! Matrix Market round trip: generate a benchmark matrix, write it out,
//! read it back, and solve for the dominant eigenpair.
//!
//! Run with: cargo run --example matrix_market_io

use momentum_eigs::iterations::{iterate, IterationConfig, Method};
use momentum_eigs::matrices::{generate, MatrixSpec};
use momentum_eigs::matrix_market::{mm_read, mm_write};

fn main() -> momentum_eigs::Result<()> {
    let spec = MatrixSpec::RandomTridiagonal { n: 120, seed: 42 };
    let a = generate(&spec)?;

    let dir = std::env::temp_dir().join("momentum-eigs-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("tridiag.mtx");
    mm_write(&a, &path)?;
    println!("wrote {} ({} stored entries)", path.display(), a.nnz());

    // the writer expands to general coordinate form, so compare entries
    // (the symmetry hint is metadata and is not preserved)
    let b = mm_read(&path)?;
    let (rp_a, ci_a, v_a) = a.csr_parts().unwrap();
    let (rp_b, ci_b, v_b) = b.csr_parts().unwrap();
    assert_eq!(rp_a, rp_b);
    assert_eq!(ci_a, ci_b);
    assert!(v_a.iter().zip(v_b).all(|(x, y)| x.to_bits() == y.to_bits()));
    println!("read it back bit-identically");

    let res = iterate(&b, &IterationConfig::new(Method::DynamicMomentum))?;
    println!(
        "dominant eigenvalue {:.9} after {} products ({})",
        res.eigenvalue(),
        res.matvec_count,
        res.stop
    );
    Ok(())
}
