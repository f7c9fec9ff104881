//! Finite-grid estimates of the smooth skew information rates for i.i.d.
//! coherence bits at two copy rates, and the cost and distillation bounds
//! read off from them.
use asymrate::asymptotics::{cost_lower_bound, dist_upper_bound, estimate_rates, Rate, StateFamily};
use asymrate::reference::coherence_bit;
use asymrate::smoothing::SmoothingOptions;
use asymrate::MonotoneFunction;

fn main() -> asymrate::Result<()> {
    let (phi, h) = coherence_bit();
    let f = MonotoneFunction::sld();
    let opts = SmoothingOptions { restarts: 2, ..Default::default() };
    for rate in ["1", "1/2"] {
        let fam = StateFamily::iid(&phi, &h, rate.parse::<Rate>()?)?;
        let rep = estimate_rates(&fam, &f, &[2, 4, 6], &[0.2, 0.1, 0.05], &opts)?;
        println!("{} (m_cap {})", rep.family, fam.m_cap);
        for (m, row) in rep.m_grid.iter().zip(&rep.values) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.5}")).collect();
            println!("  m={m}: {}", cells.join("  "));
        }
        println!(
            "  cost >= {:.4}, distillable <= {:.4}",
            cost_lower_bound(&rep),
            dist_upper_bound(&rep)
        );
    }
    println!("{}", asymrate::asymptotics::RATE_CAVEAT);
    Ok(())
}
