use std::io::Write;

use crate::error::Result;

use super::{CurvePoint, TableCell};

/// Columns `gamma,pi0,mu_min,mu_max,kind,mean,std,mc_se,reps,seed`. Floats use the
/// shortest representation that round-trips.
pub fn write_table_csv<W: Write>(out: W, cells: &[TableCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "gamma", "pi0", "mu_min", "mu_max", "kind", "mean", "std", "mc_se", "reps", "seed",
    ])?;
    for c in cells {
        let s = &c.setting;
        w.write_record([
            s.gamma.to_string(),
            s.pi0.to_string(),
            s.mu_min.to_string(),
            s.mu_max.to_string(),
            c.kind.to_string(),
            c.mean.to_string(),
            c.std.to_string(),
            c.mc_standard_error.to_string(),
            s.reps.to_string(),
            s.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t_or_lambda,value,kind`.
pub fn write_curve_csv<W: Write>(out: W, points: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t_or_lambda", "value", "kind"])?;
    for p in points {
        w.write_record([p.x.to_string(), p.value.to_string(), p.label.clone()])?;
    }
    w.flush()?;
    Ok(())
}
