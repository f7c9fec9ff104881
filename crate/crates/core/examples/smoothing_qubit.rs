//! Smoothed skew information of a qubit: the projected-gradient optimizer
//! against the Bloch-disc brute force, for a few radii.
use asymrate::operator::{trace_distance, DensityMatrix, HermitianOperator};
use asymrate::smoothing::{brute_force_smooth, dephasing_radius, smooth_skew_info, SmoothingOptions};
use asymrate::{skew_info, MonotoneFunction};

fn main() -> asymrate::Result<()> {
    let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
    let rho = DensityMatrix::pure_real(&[0.6, 0.8])?.mix(&DensityMatrix::maximally_mixed(2), 0.2)?;
    let f = MonotoneFunction::wyd(0.3)?;
    println!("unsmoothed {:.6}, dephasing radius {:.4}", skew_info(&rho, &h, &f)?.value, dephasing_radius(&rho, &h)?);
    let opts = SmoothingOptions::default();
    println!("eps,optimizer,brute_force,witness_distance,iterations");
    for eps in [0.02, 0.05, 0.1, 0.2, 0.3] {
        let r = smooth_skew_info(&rho, &h, &f, eps, &opts)?;
        let b = brute_force_smooth(&rho, &h, &f, eps, 400)?;
        println!("{eps},{:.8},{:.8},{:.6},{}", r.value, b, trace_distance(&rho, &r.witness)?, r.iterations);
    }
    Ok(())
}
