//! Writing a certificate for an accepted detection and replaying it.
use polymax::cert::{verify, Certificate, OracleSpec, Params};
use polymax::detect1d::reconstruct_transintegral;
use polymax::{DetectOutcome, Rat};

fn main() -> polymax::Result<()> {
    let spec = OracleSpec::parse("builtin:abs")?;
    let o = spec.build()?;
    let params = Params::default();
    let out = reconstruct_transintegral(&o, &Rat::new(-2, 1), &Rat::new(3, 1), params.budget)?;
    let DetectOutcome::Accept {
        reconstruction,
        queries,
    } = out
    else {
        panic!("abs is convex with integer slopes");
    };
    let cert = Certificate::interval(spec, params, &reconstruction, &queries, false);
    let text = serde_json::to_string_pretty(&cert.to_json()).expect("json");
    println!("{text}");

    let back = Certificate::from_json(&text)?;
    let report = verify(&back, &back.oracle.build()?)?;
    println!(
        "replayed {} queries, {} mismatches",
        report.queries,
        report.mismatches.len()
    );
    Ok(())
}
