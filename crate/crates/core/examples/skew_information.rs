//! Metric adjusted skew informations of the qutrit mixture
//! `ρ(q) = q|ψ1⟩⟨ψ1| + (1−q)|ψ2⟩⟨ψ2|` under `H = diag(0, 1, 2)`, next to
//! their closed forms, and the quantum Fisher information `F = 4 I^SLD`.
use asymrate::reference::{qutrit_hamiltonian, qutrit_mixture, sld_mixture_closed_form, wyd_mixture_closed_form};
use asymrate::skew::wyd_p_to_zero_bound;
use asymrate::{qfi, skew_info, MonotoneFunction};

fn main() -> asymrate::Result<()> {
    let h = qutrit_hamiltonian();
    let sld = MonotoneFunction::sld();
    let wyd = MonotoneFunction::wyd(0.3)?;
    let wyd_small = MonotoneFunction::wyd(1e-4)?;
    println!("q,I_sld,closed_sld,I_wyd(0.3),closed_wyd(0.3),F,4I_wyd(1e-4),limit");
    for k in 1..10 {
        let q = k as f64 / 10.0;
        let rho = qutrit_mixture(q)?;
        println!(
            "{q:.1},{:.12},{:.12},{:.12},{:.12},{:.12},{:.6},{:.6}",
            skew_info(&rho, &h, &sld)?.value,
            sld_mixture_closed_form(q),
            skew_info(&rho, &h, &wyd)?.value,
            wyd_mixture_closed_form(q, 0.3),
            qfi(&rho, &h)?,
            4.0 * skew_info(&rho, &h, &wyd_small)?.value,
            wyd_p_to_zero_bound(q)?,
        );
    }
    Ok(())
}
