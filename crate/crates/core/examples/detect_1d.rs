//! One-variable reconstruction: accept, reject and budget exhaustion.
use polymax::detect1d::{reconstruct_transintegral, DEFAULT_BUDGET};
use polymax::{DetectOutcome, FunctionOracle, Rat};

fn main() -> polymax::Result<()> {
    let (a, b) = (Rat::new(-2, 1), Rat::new(3, 1));
    for name in ["abs", "halfslope", "sawtooth-nonconvex", "square"] {
        let o = FunctionOracle::builtin(name)?;
        let out = reconstruct_transintegral(&o, &a, &b, DEFAULT_BUDGET)?;
        match &out {
            DetectOutcome::Accept {
                reconstruction,
                queries,
            } => println!(
                "{name}: accept {} with breakpoints {:?} after {} queries",
                reconstruction.to_function(),
                reconstruction.breakpoints,
                queries.len()
            ),
            DetectOutcome::Reject(r) => println!("{name}: reject, witness {:?}", r.witness),
            DetectOutcome::Exhausted(rep) => println!("{name}: exhausted ({})", rep.reason),
        }
    }
    Ok(())
}
