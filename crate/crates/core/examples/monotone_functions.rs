//! Standard monotone functions: builtin families, a user-supplied one, the
//! grid checks of the defining conditions and the Morozova–Chentsov kernel.
use asymrate::monotone::{mc_function, validate_standard_monotone};
use asymrate::MonotoneFunction;

fn main() -> asymrate::Result<()> {
    // the geometric-arithmetic mean ((1+√x)/2)² is standard and regular
    let custom = MonotoneFunction::custom("root-mean", |x: f64| ((1.0 + x.sqrt()) / 2.0).powi(2), 0.25);
    let fs = [
        MonotoneFunction::sld(),
        MonotoneFunction::rld(),
        MonotoneFunction::wyd(0.25)?,
        custom,
    ];
    for f in &fs {
        let v = validate_standard_monotone(f, 1000)?;
        println!(
            "{:<16} f(0)={:<8.4} f(4)={:<8.4} regular={:<5} conditions={} c_f(0.2,0.7)={:.6}",
            f.tag().to_string(),
            f.f0(),
            f.eval(4.0),
            f.is_regular(),
            if v.all_passed() { "ok" } else { "violated" },
            mc_function(f, 0.2, 0.7)?,
        );
    }
    Ok(())
}
