//! Variance, distance to coherence bits, and smoothed skew information per
//! copy along the non-i.i.d. family `ψ_m = √(1−ε_m) φ_coh^{⊗m} + √ε_m |2⟩^{⊗m}`.
use asymrate::asymptotics::StateFamily;
use asymrate::operator::{trace_distance, variance};
use asymrate::smoothing::{smooth_skew_info, SmoothingOptions};
use asymrate::{skew_info, MonotoneFunction};

fn main() -> asymrate::Result<()> {
    let fam = StateFamily::noniid_example();
    let f = MonotoneFunction::sld();
    let opts = SmoothingOptions::default();
    println!("m,var,formula,distance,unsmoothed_per_m,smoothed_per_m(eps=0.1)");
    for m in [1, 2, 3, 4, 5, 6, 7, 9, 16, 25] {
        let mem = fam.member(m)?;
        let var = variance(&mem.state, &mem.hamiltonian)?;
        let d = trace_distance(&mem.state, &StateFamily::noniid_reference(m)?)?;
        let raw = skew_info(&mem.state, &mem.hamiltonian, &f)?.value / m as f64;
        let s = smooth_skew_info(&mem.state, &mem.hamiltonian, &f, 0.1, &opts)?.value / m as f64;
        println!("{m},{var:.10},{:.10},{d:.6},{raw:.6},{s:.6}", StateFamily::noniid_variance_formula(m));
    }
    Ok(())
}
