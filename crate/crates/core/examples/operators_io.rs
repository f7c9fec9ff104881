//! Dense operator basics: tensor products, partial traces, time evolution,
//! trace distance, and the `{dim, re, im}` JSON matrix format.
use asymrate::operator::{
    commutator_norm, partial_trace_state, read_matrix_json, time_evolve, trace_distance, write_matrix_json, DensityMatrix,
    HermitianOperator, Subsystem,
};
use asymrate::reference::coherence_bit;

fn main() -> asymrate::Result<()> {
    let (phi, h) = coherence_bit();
    let pair = phi.tensor(&DensityMatrix::maximally_mixed(2))?;
    let h2 = h.tensor(&HermitianOperator::identity(2))?;
    println!("dim {}, [ρ, H] norm {:.4}", pair.dim(), commutator_norm(&pair, &h2)?);
    let back = partial_trace_state(&pair, (2, 2), Subsystem::B)?;
    println!("partial trace recovers φ_coh: distance {:.2e}", trace_distance(&back, &phi)?);
    for t in [0.0, 1.0, std::f64::consts::PI] {
        println!("t = {t:.3}: D(φ_t, φ) = {:.6}", trace_distance(&time_evolve(&phi, &h, t)?, &phi)?);
    }
    let mut buf = Vec::new();
    write_matrix_json(phi.matrix(), &mut buf)?;
    println!("{}", String::from_utf8_lossy(&buf));
    let m = read_matrix_json(buf.as_slice())?;
    println!("round trip exact: {}", &m == phi.matrix());
    Ok(())
}
