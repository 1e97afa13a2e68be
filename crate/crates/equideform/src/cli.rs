//! Job execution behind the `equideform` binary: load inputs, run the
//! requested computation, and render the report in the requested format.
//!
//! Exit codes: 0 success, 2 malformed input (including usage errors),
//! 3 validation failure (invalid group or cover), 4 size-cap exceedance,
//! 1 verification failure.
//!
//! Every report embeds the tool version, the input digest, the caps in
//! force, and the conventions used; reports contain nothing run-dependent,
//! so identical inputs produce byte-identical output.

use crate::covers::CoverError;
use crate::dimensions::{
    dim_im_alpha, dimension_report, DimensionReport, DimensionsError, ImAlpha, ImAlphaConvention,
    PsiReport,
};
use crate::groups::GroupError;
use crate::homology::{homology_dim, HomologyError, SizeCaps};
use crate::io::{self, IoError};
use crate::verify::{verify_suite, VerifyScope, VerifySummary};
use serde::Serialize;
use std::path::PathBuf;

pub const MAX_ORDER_ENV: &str = "EQUIDEFORM_MAX_ORDER";
pub const MAX_CHAIN_ENV: &str = "EQUIDEFORM_MAX_CHAIN";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    DimImAlpha,
    OrdinaryCovariants,
    Homology,
    PsiReport,
    Verify,
}

impl Command {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dim-im-alpha" => Some(Self::DimImAlpha),
            "ordinary-covariants" => Some(Self::OrdinaryCovariants),
            "homology" => Some(Self::Homology),
            "psi-report" => Some(Self::PsiReport),
            "verify" => Some(Self::Verify),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::DimImAlpha => "dim-im-alpha",
            Self::OrdinaryCovariants => "ordinary-covariants",
            Self::Homology => "homology",
            Self::PsiReport => "psi-report",
            Self::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "json" => Some(Self::Json),
            "csv" => Some(Self::Csv),
            "text" => Some(Self::Text),
            _ => None,
        }
    }
}

/// A fully parsed job. Flags win over environment variables, which win
/// over the defaults.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub convention: ImAlphaConvention,
    pub format: OutputFormat,
    pub max_order: Option<usize>,
    pub max_chain: Option<usize>,
    pub degree: Option<usize>,
    pub scope: VerifyScope,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            convention: ImAlphaConvention::ClassicalFloorFromE0,
            format: OutputFormat::Json,
            max_order: None,
            max_chain: None,
            degree: None,
            scope: VerifyScope::Fast,
        }
    }

    fn caps(&self) -> SizeCaps {
        let defaults = SizeCaps::default();
        let env_usize = |key: &str| {
            std::env::var(key).ok().and_then(|v| v.parse::<usize>().ok())
        };
        SizeCaps {
            max_order: self.max_order.or_else(|| env_usize(MAX_ORDER_ENV)).unwrap_or(defaults.max_order),
            max_chain: self.max_chain.or_else(|| env_usize(MAX_CHAIN_ENV)).unwrap_or(defaults.max_chain),
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { message: message.into(), exit_code: 2 }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let exit_code = match &e {
            IoError::Read { .. } | IoError::Parse { .. } | IoError::Version { .. } => 2,
            IoError::UnknownGroup(_) => 2,
            IoError::Group(g) => group_exit_code(g),
            IoError::Homology(h) => homology_exit_code(h),
        };
        Self { message: e.to_string(), exit_code }
    }
}

fn group_exit_code(e: &GroupError) -> i32 {
    match e {
        GroupError::SizeCapExceeded { .. } => 4,
        _ => 3,
    }
}

fn homology_exit_code(e: &HomologyError) -> i32 {
    match e {
        HomologyError::SizeCapExceeded { .. } => 4,
        _ => 3,
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        Self { message: e.to_string(), exit_code: 3 }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        Self { message: e.to_string(), exit_code: group_exit_code(&e) }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        Self { message: e.to_string(), exit_code: homology_exit_code(&e) }
    }
}

impl From<DimensionsError> for CliError {
    fn from(e: DimensionsError) -> Self {
        let exit_code = match &e {
            DimensionsError::Cover(c) => return Self::from(c.clone()),
            DimensionsError::Homology(h) => homology_exit_code(h),
            DimensionsError::Group(g) => group_exit_code(g),
            DimensionsError::NotOrdinaryCompatible(_) | DimensionsError::NotAPGroup { .. } => 3,
        };
        Self { message: e.to_string(), exit_code }
    }
}

#[derive(Debug, Clone, Serialize)]
struct CapsEcho {
    max_order: usize,
    max_chain: usize,
}

#[derive(Debug, Clone, Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    caps: CapsEcho,
    conventions: Conventions,
}

#[derive(Debug, Clone, Serialize)]
struct Conventions {
    im_alpha: &'static str,
    ramification_divisor: &'static str,
    riemann_hurwitz: &'static str,
    homology_coefficients: &'static str,
}

fn meta(job: &JobSpec, digest: Option<String>) -> Meta {
    let caps = job.caps();
    Meta {
        tool: "equideform",
        version: env!("CARGO_PKG_VERSION"),
        command: job.command.name(),
        input_digest: digest,
        caps: CapsEcho { max_order: caps.max_order, max_chain: caps.max_chain },
        conventions: Conventions {
            im_alpha: match job.convention {
                ImAlphaConvention::PaperCeilingFromE1 => "paper_ceiling_from_e1",
                ImAlphaConvention::ClassicalFloorFromE0 => "classical_floor_from_e0",
            },
            ramification_divisor: "from_e0",
            riemann_hurwitz: "from_e0",
            homology_coefficients: "prime_field_bar_complex",
        },
    }
}

#[derive(Serialize)]
struct ImAlphaEnvelope {
    meta: Meta,
    im_alpha: ImAlpha,
}

#[derive(Serialize)]
struct CovariantsEnvelope {
    meta: Meta,
    report: DimensionReport,
}

#[derive(Serialize)]
struct HomologyEnvelope {
    meta: Meta,
    p: u64,
    group_order: usize,
    module_dim: usize,
    dims: Vec<DegreeDim>,
}

#[derive(Serialize)]
struct DegreeDim {
    degree: usize,
    dim: usize,
}

#[derive(Serialize)]
struct PsiEnvelope {
    meta: Meta,
    p: u64,
    group_order: usize,
    subgroup_orders: Vec<usize>,
    psi: PsiReport,
    coker_psi1: usize,
    ker_psi2: usize,
}

#[derive(Serialize)]
struct VerifyEnvelope {
    meta: Meta,
    summary: VerifySummary,
}

/// Run one job to completion and render its report. The `Err` side carries
/// the process exit code.
pub fn run_job(job: &JobSpec) -> Result<String, CliError> {
    let caps = job.caps();
    match job.command {
        Command::DimImAlpha => {
            let path = require_input(job)?;
            let (file, digest) = io::load_cover_file(&path)?;
            let cover = file.to_cover(caps.max_order)?;
            let im_alpha = dim_im_alpha(&cover, job.convention)?;
            let envelope = ImAlphaEnvelope { meta: meta(job, Some(digest)), im_alpha };
            Ok(match job.format {
                OutputFormat::Json => to_json(&envelope),
                OutputFormat::Csv => {
                    let mut s = String::from("value,convention,nonspecial_violated\n");
                    s.push_str(&format!(
                        "{},{},{}\n",
                        envelope.im_alpha.value,
                        envelope.meta.conventions.im_alpha,
                        envelope.im_alpha.nonspecial_violated
                    ));
                    s
                }
                OutputFormat::Text => format!(
                    "dim Im(alpha) = {} ({}){}\n",
                    envelope.im_alpha.value,
                    envelope.meta.conventions.im_alpha,
                    if envelope.im_alpha.nonspecial_violated {
                        " [nonspecial hypothesis violated]"
                    } else {
                        ""
                    }
                ),
            })
        }
        Command::OrdinaryCovariants => {
            let path = require_input(job)?;
            let (file, digest) = io::load_cover_file(&path)?;
            let cover = file.to_cover(caps.max_order)?;
            let report = dimension_report(&cover, job.convention, &caps)?;
            let envelope = CovariantsEnvelope { meta: meta(job, Some(digest)), report };
            Ok(match job.format {
                OutputFormat::Json => to_json(&envelope),
                OutputFormat::Csv => covariants_csv(&envelope.report),
                OutputFormat::Text => covariants_text(&envelope.report),
            })
        }
        Command::Homology => {
            let path = require_input(job)?;
            let (file, digest) = io::load_homology_job(&path)?;
            let group = io::resolve_group(&file.group, caps.max_order)?;
            let module = file.module.build(&group, file.p)?;
            let degrees: Vec<usize> = match job.degree {
                Some(n) if n <= 2 => vec![n],
                Some(n) => {
                    return Err(CliError::usage(format!("degree {n} is outside 0..=2")))
                }
                None => vec![0, 1, 2],
            };
            let dims = degrees
                .into_iter()
                .map(|n| Ok(DegreeDim { degree: n, dim: homology_dim(&module, n, &caps)? }))
                .collect::<Result<Vec<_>, CliError>>()?;
            let envelope = HomologyEnvelope {
                meta: meta(job, Some(digest)),
                p: file.p,
                group_order: group.order(),
                module_dim: module.dim(),
                dims,
            };
            Ok(match job.format {
                OutputFormat::Json => to_json(&envelope),
                OutputFormat::Csv => {
                    let mut s = String::from("degree,dim\n");
                    for d in &envelope.dims {
                        s.push_str(&format!("{},{}\n", d.degree, d.dim));
                    }
                    s
                }
                OutputFormat::Text => {
                    let mut s = format!(
                        "H_n of a dim-{} module over F_{} for a group of order {}\n",
                        envelope.module_dim, envelope.p, envelope.group_order
                    );
                    for d in &envelope.dims {
                        s.push_str(&format!("H_{} = {}\n", d.degree, d.dim));
                    }
                    s
                }
            })
        }
        Command::PsiReport => {
            let path = require_input(job)?;
            let (file, digest) = io::load_psi_job(&path)?;
            let group = io::resolve_group(&file.group, caps.max_order)?;
            let subgroups = file
                .subgroups
                .iter()
                .map(|gens| crate::groups::subgroup_generated(&group, gens))
                .collect::<Result<Vec<_>, _>>()?;
            let psi = crate::dimensions::psi_report(&group, file.p, &subgroups, &caps)?;
            let envelope = PsiEnvelope {
                meta: meta(job, Some(digest)),
                p: file.p,
                group_order: group.order(),
                subgroup_orders: subgroups.iter().map(|h| h.order()).collect(),
                coker_psi1: psi.psi1.cokernel_dim(),
                ker_psi2: psi.psi2.kernel_dim(),
                psi,
            };
            Ok(match job.format {
                OutputFormat::Json => to_json(&envelope),
                OutputFormat::Csv => {
                    let mut s = String::from(
                        "psi1_domain,psi1_target,psi1_rank,coker_psi1,psi2_domain,psi2_target,psi2_rank,ker_psi2\n",
                    );
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        envelope.psi.psi1.domain_dim,
                        envelope.psi.psi1.target_dim,
                        envelope.psi.psi1.rank,
                        envelope.coker_psi1,
                        envelope.psi.psi2.domain_dim,
                        envelope.psi.psi2.target_dim,
                        envelope.psi.psi2.rank,
                        envelope.ker_psi2
                    ));
                    s
                }
                OutputFormat::Text => format!(
                    "psi_1 (on H_2): domain {}, target {}, rank {}, coker {}\npsi_2 (on H_1): domain {}, target {}, rank {}, ker {}\n",
                    envelope.psi.psi1.domain_dim,
                    envelope.psi.psi1.target_dim,
                    envelope.psi.psi1.rank,
                    envelope.coker_psi1,
                    envelope.psi.psi2.domain_dim,
                    envelope.psi.psi2.target_dim,
                    envelope.psi.psi2.rank,
                    envelope.ker_psi2
                ),
            })
        }
        Command::Verify => {
            let summary = verify_suite(job.scope, &caps);
            let rendered = match job.format {
                OutputFormat::Json => {
                    to_json(&VerifyEnvelope { meta: meta(job, None), summary: summary.clone() })
                }
                OutputFormat::Csv => {
                    let mut s = String::from("check,passed,detail\n");
                    for c in &summary.checks {
                        s.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail));
                    }
                    s
                }
                OutputFormat::Text => summary.render_text(),
            };
            if summary.all_passed() {
                Ok(rendered)
            } else {
                Err(CliError { message: rendered, exit_code: 1 })
            }
        }
    }
}

fn require_input(job: &JobSpec) -> Result<PathBuf, CliError> {
    job.input
        .clone()
        .ok_or_else(|| CliError::usage(format!("{} requires --input <file>", job.command.name())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Fixed column order for the flat per-cover row; documented in the README.
pub const COVARIANTS_CSV_HEADER: &str = "characteristic,group_order,quotient_genus,branch_points,wild_branch_points,genus,deg_r_from_e0,deg_r_from_e1,ell_k_plus_a,dim_im_alpha,im_alpha_convention,psi1_rank,coker_psi1,psi2_rank,ker_psi2,h1_ker_phi_route_a,h1_ker_phi_route_b,ker_phi_coinvariants,covariants_exact,covariants_paper_plus1,covariants_paper_minus1,corollary_delta,corollary_delta_hopf,hopf_h2_group";

fn covariants_csv(r: &DimensionReport) -> String {
    let convention = match r.dim_im_alpha.convention {
        ImAlphaConvention::PaperCeilingFromE1 => "paper_ceiling_from_e1",
        ImAlphaConvention::ClassicalFloorFromE0 => "classical_floor_from_e0",
    };
    format!(
        "{}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        COVARIANTS_CSV_HEADER,
        r.characteristic,
        r.group_order,
        r.quotient_genus,
        r.branch_points,
        r.wild_branch_points,
        r.genus,
        r.ramification_divisor_degree_from_e0,
        r.ramification_divisor_degree_from_e1,
        r.ell_k_plus_a,
        r.dim_im_alpha.value,
        convention,
        r.psi1.rank,
        r.psi1_cokernel,
        r.psi2.rank,
        r.psi2_kernel,
        r.h1_ker_phi_route_a,
        r.h1_ker_phi_route_b,
        r.ker_phi_coinvariants,
        r.covariants_exact,
        r.covariants_paper_plus1,
        r.covariants_paper_minus1,
        r.corollary_delta,
        r.corollary_delta_hopf,
        r.hopf_mode_h2_group,
    )
}

fn covariants_text(r: &DimensionReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "cover: |G| = {}, characteristic {}, g_Y = {}, r = {} ({} wild), g_X = {}\n",
        r.group_order, r.characteristic, r.quotient_genus, r.branch_points,
        r.wild_branch_points, r.genus
    ));
    s.push_str(&format!(
        "deg R = {} (from e_0), {} (from e_1); l(K + A) = {}\n",
        r.ramification_divisor_degree_from_e0, r.ramification_divisor_degree_from_e1,
        r.ell_k_plus_a
    ));
    s.push_str(&format!("dim Im(alpha) = {}\n", r.dim_im_alpha.value));
    s.push_str(&format!(
        "psi_1: rank {}, coker {}; psi_2: rank {}, ker {}\n",
        r.psi1.rank, r.psi1_cokernel, r.psi2.rank, r.psi2_kernel
    ));
    s.push_str(&format!(
        "H_1(G, ker Phi) = {} (route A) = {} (route B); (ker Phi)_G = {}\n",
        r.h1_ker_phi_route_a, r.h1_ker_phi_route_b, r.ker_phi_coinvariants
    ));
    s.push_str(&format!(
        "covariants: exact = {}, closed forms = {} (+1) / {} (-1)\n",
        r.covariants_exact, r.covariants_paper_plus1, r.covariants_paper_minus1
    ));
    s.push_str(&format!(
        "corollary delta = {} (prime-field mode), {} (Hopf mode); Hopf-mode H_2(G) = {}\n",
        r.corollary_delta, r.corollary_delta_hopf, r.hopf_mode_h2_group
    ));
    for d in &r.diagnostics {
        s.push_str(&format!("note: {d}\n"));
    }
    s
}
