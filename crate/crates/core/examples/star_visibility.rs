//! Star network with three branches and equal Werner visibilities. The
//! FQNN flag flips at v = 2^{-1/6}; the FNN bound is never reached.

use netcert::io::StrategyKind;
use netcert::sweep::{run_sweep, SweepParameter, SweepSpec};

fn main() -> netcert::Result<()> {
    let spec = SweepSpec::new(StrategyKind::StarIj, 3, SweepParameter::Visibility, 0.85, 0.95, 21);
    let table = run_sweep(&spec)?;
    let col = |name: &str| table.column(name).expect("column");
    let (v, value, fqnn, fnn) = (col("visibility"), col("value"), col("fqnn"), col("fnn"));
    println!("threshold 2^(-1/6) = {:.6}", 2f64.powf(-1.0 / 6.0));
    for row in &table.rows {
        println!("v = {:.4}  value = {:.6}  FQNN {:5}  FNN {}", row[v].parse::<f64>().unwrap(), row[value].parse::<f64>().unwrap(), row[fqnn], row[fnn]);
    }
    Ok(())
}
