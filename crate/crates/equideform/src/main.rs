use equideform::cli::{CliError, Command, JobSpec, OutputFormat};
use equideform::dimensions::ImAlphaConvention;
use equideform::verify::VerifyScope;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "\
equideform <command> [options]

commands:
  dim-im-alpha         tangent-space count on the quotient curve from a cover file
  ordinary-covariants  full dimension report for an ordinary cover with a p-group
  homology             H_0..H_2 of a module described in a job file
  psi-report           the maps induced on H_1 and H_2 by the coset summation
  verify               run the built-in verification suite

options:
  --input <file>               input document (JSON); required except for verify
  --convention paper|classical im-alpha convention (default: classical)
  --format json|csv|text       output format (default: json)
  --max-order <N>              group order cap (default 64; env EQUIDEFORM_MAX_ORDER)
  --max-chain <N>              bar chain cap (default 1048576; env EQUIDEFORM_MAX_CHAIN)
  --degree <n>                 restrict homology to one degree (0..=2)
  --scope fast|full            verification scope (default: fast)

exit codes: 0 ok, 1 verification failure, 2 malformed input, 3 invalid
group or cover, 4 size cap exceeded.
";

fn parse_args(args: &[String]) -> Result<JobSpec, CliError> {
    let usage = |msg: String| CliError { message: format!("{msg}\n\n{USAGE}"), exit_code: 2 };
    let Some(command_name) = args.first() else {
        return Err(usage("missing command".into()));
    };
    let Some(command) = Command::parse(command_name) else {
        return Err(usage(format!("unknown command `{command_name}`")));
    };
    let mut job = JobSpec::new(command);
    let mut it = args[1..].iter();
    while let Some(flag) = it.next() {
        let mut value = |name: &str| {
            it.next().cloned().ok_or_else(|| usage(format!("{name} requires a value")))
        };
        match flag.as_str() {
            "--input" => job.input = Some(PathBuf::from(value("--input")?)),
            "--convention" => {
                job.convention = match value("--convention")?.as_str() {
                    "paper" => ImAlphaConvention::PaperCeilingFromE1,
                    "classical" => ImAlphaConvention::ClassicalFloorFromE0,
                    other => return Err(usage(format!("unknown convention `{other}`"))),
                }
            }
            "--format" => {
                let v = value("--format")?;
                job.format = OutputFormat::parse(&v)
                    .ok_or_else(|| usage(format!("unknown format `{v}`")))?;
            }
            "--max-order" => {
                let v = value("--max-order")?;
                job.max_order =
                    Some(v.parse().map_err(|_| usage(format!("bad --max-order `{v}`")))?);
            }
            "--max-chain" => {
                let v = value("--max-chain")?;
                job.max_chain =
                    Some(v.parse().map_err(|_| usage(format!("bad --max-chain `{v}`")))?);
            }
            "--degree" => {
                let v = value("--degree")?;
                job.degree = Some(v.parse().map_err(|_| usage(format!("bad --degree `{v}`")))?);
            }
            "--scope" => {
                job.scope = match value("--scope")?.as_str() {
                    "fast" => VerifyScope::Fast,
                    "full" => VerifyScope::Full,
                    other => return Err(usage(format!("unknown scope `{other}`"))),
                }
            }
            other => return Err(usage(format!("unknown option `{other}`"))),
        }
    }
    Ok(job)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "-h" || a == "--help") || args.is_empty() {
        print!("{USAGE}");
        return ExitCode::from(if args.is_empty() { 2 } else { 0 });
    }
    let job = match parse_args(&args) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code as u8);
        }
    };
    match equideform::cli::run_job(&job) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if e.exit_code == 1 {
                // verification failure: the report itself is the message
                print!("{}", e.message);
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code as u8)
        }
    }
}
