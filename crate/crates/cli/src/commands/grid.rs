use esg_irt::topsis::ParamGrid;

use super::{out_dir, write_output};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::GridArgs;

/// Writes `grid.csv`: one column per parameter, one row per combination.
pub fn run(config: &RunConfig, args: GridArgs) -> CliResult<()> {
    let grid = if args.params.is_empty() {
        ParamGrid::classifier_sweep()
    } else {
        ParamGrid::from_specs(&args.params)?
    };
    let mut count = 0usize;
    write_output(&out_dir(config, &args.out), "grid.csv", |buf| {
        let mut wtr = csv::Writer::from_writer(buf);
        wtr.write_record(grid.names())?;
        for set in grid.iter() {
            wtr.write_record(set.0.iter().map(|(_, v)| v))?;
            count += 1;
        }
        wtr.flush().map_err(|e| esg_irt::Error::Csv(e.into()))
    })?;
    println!("{count} combinations of {} parameters", grid.parameters().len());
    Ok(())
}
