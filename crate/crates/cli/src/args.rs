//! Hand-rolled argument parsing for the four subcommands.

use std::path::PathBuf;

use crate::config_file::{parse_config, RunConfig, TrajectorySpec};
use crate::{CliError, Result};

pub const USAGE: &str = "\
usage: gridcell <command> [options]

commands:
  simulate   generate a trajectory, run the estimator and baselines,
             write trajectory.csv, estimates.csv, snapshots and report.txt
  calibrate  measure the displacement gain and print gamma=<value>
  compare    <track_a.csv> <track_b.csv>: print error metrics between tracks
  bench      time the fast kernel path against the dense one

options (simulate, calibrate, bench):
  --config <path>            key = value config file
  --out <dir>                output directory (default: out)
  --seed <u64>               override the network seed
  --trajectory circle|rect|csv:<path>
  --disturbance on|off       apply the wave/noise model to measured velocity
  --snapshot-every <n>       snapshot interval in samples (0 = never)
";

pub enum Action {
    Simulate(Box<RunConfig>),
    Calibrate(Box<RunConfig>),
    Compare(PathBuf, PathBuf),
    Bench(Box<RunConfig>),
}

fn take_value(args: &mut std::vec::IntoIter<String>, flag: &str) -> Result<String> {
    args.next()
        .ok_or_else(|| CliError(format!("{flag} expects a value (see --help)")))
}

fn apply_flags(
    cfg: &mut RunConfig,
    mut args: std::vec::IntoIter<String>,
    command: &str,
) -> Result<()> {
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "--config" => {
                // the config file was handled in a first pass
                let _ = take_value(&mut args, "--config")?;
            }
            "--out" => cfg.out_dir = PathBuf::from(take_value(&mut args, "--out")?),
            "--seed" => {
                let v = take_value(&mut args, "--seed")?;
                cfg.grid.seed = v
                    .parse()
                    .map_err(|_| CliError(format!("--seed: `{v}` is not a u64")))?;
            }
            "--trajectory" => {
                let v = take_value(&mut args, "--trajectory")?;
                cfg.trajectory = match v.as_str() {
                    "circle" => TrajectorySpec::Circle {
                        radius: 1.5,
                        speed: 0.1,
                        laps: 1,
                    },
                    "rect" => TrajectorySpec::Rect {
                        width: 4.0,
                        height: 2.0,
                        speed: 0.1,
                    },
                    other => {
                        if let Some(p) = other.strip_prefix("csv:") {
                            TrajectorySpec::Csv(PathBuf::from(p))
                        } else {
                            return Err(CliError(format!(
                                "--trajectory: expected circle, rect or csv:<path>, found `{other}`"
                            )));
                        }
                    }
                };
            }
            "--disturbance" => {
                let v = take_value(&mut args, "--disturbance")?;
                cfg.disturbance_on = match v.as_str() {
                    "on" => true,
                    "off" => false,
                    other => {
                        return Err(CliError(format!(
                            "--disturbance: expected on or off, found `{other}`"
                        )))
                    }
                };
            }
            "--snapshot-every" => {
                let v = take_value(&mut args, "--snapshot-every")?;
                cfg.snapshot_every = v
                    .parse()
                    .map_err(|_| CliError(format!("--snapshot-every: `{v}` is not a count")))?;
            }
            other => {
                return Err(CliError(format!(
                    "{command}: unknown option `{other}` (see --help)"
                )))
            }
        }
    }
    Ok(())
}

/// First pass: honor --config so later flags override the file.
fn load_config(args: &[String]) -> Result<RunConfig> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| CliError("--config expects a path".into()))?;
            return parse_config(std::path::Path::new(path));
        }
    }
    Ok(RunConfig::default())
}

pub fn parse(argv: Vec<String>) -> Result<Action> {
    let mut args = argv.into_iter();
    let command = args.next().ok_or_else(|| CliError(USAGE.into()))?;
    let rest: Vec<String> = args.collect();
    match command.as_str() {
        "simulate" | "calibrate" | "bench" => {
            let mut cfg = load_config(&rest)?;
            apply_flags(&mut cfg, rest.into_iter(), &command)?;
            Ok(match command.as_str() {
                "simulate" => Action::Simulate(Box::new(cfg)),
                "calibrate" => Action::Calibrate(Box::new(cfg)),
                _ => Action::Bench(Box::new(cfg)),
            })
        }
        "compare" => {
            if rest.len() != 2 || rest[0].starts_with("--") {
                return Err(CliError(
                    "compare expects exactly two track files (see --help)".into(),
                ));
            }
            Ok(Action::Compare(
                PathBuf::from(&rest[0]),
                PathBuf::from(&rest[1]),
            ))
        }
        "--help" | "-h" | "help" => Err(CliError(USAGE.into())),
        other => Err(CliError(format!(
            "unknown command `{other}`\n\n{USAGE}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn parses_simulate_with_overrides() {
        let action = parse(argv(
            "simulate --seed 7 --trajectory rect --disturbance on --snapshot-every 50 --out /tmp/x",
        ))
        .unwrap();
        match action {
            Action::Simulate(cfg) => {
                assert_eq!(cfg.grid.seed, 7);
                assert!(cfg.disturbance_on);
                assert_eq!(cfg.snapshot_every, 50);
                assert!(matches!(cfg.trajectory, TrajectorySpec::Rect { .. }));
            }
            _ => panic!("wrong action"),
        }
    }

    #[test]
    fn rejects_unknown_flags_and_commands() {
        assert!(parse(argv("simulate --what 1")).is_err());
        assert!(parse(argv("flybywire")).is_err());
        assert!(parse(argv("compare one.csv")).is_err());
    }
}
