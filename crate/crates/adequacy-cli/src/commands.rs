//! One function per subcommand. Each resolves its inputs (flag beats
//! scenario key beats default), runs the computation, and returns the
//! rendered report; exit-code mapping lives in `main`.

use crate::report::{
    self, CensusOut, CensusRow, ConstructOut, CosetOut, CosetSearchResult, Envelope,
    FamilyRecordOut, H1Out, ToolInfo, WitnessOut,
};
use crate::scenario::{ScenarioKind, ScenarioSpec};
use adequacy_core::adequacy::{analyze, cannot_span_by_count, count_p_regular};
use adequacy_core::catalog;
use adequacy_core::cohomology::h1_dimension;
use adequacy_core::constructions::{
    a4_subgroup_psl2, build_example1, build_taylor_example, build_wreath_example,
    dihedral_subgroup_psl2, psl2, scan_coset_witness, scan_psl2_family, FamilyScanOutcome,
    WreathOutcome, TAYLOR_EVEN_Q,
};
use adequacy_core::field::{splitting_degree, Field};
use adequacy_core::groups::{load_or_build, FiniteGroup};
use adequacy_core::linalg::Matrix;
use adequacy_core::modrep::Representation;
use adequacy_core::{Error, Result};
use serde::Serialize;
use std::path::PathBuf;
use std::sync::Arc;

const DEFAULT_CAP: u64 = 2_000_000;
const DEFAULT_Q_MAX: u64 = 200;

/// Raw command-line options, before resolution against the scenario file.
pub struct Opts {
    pub scenario_path: Option<PathBuf>,
    pub p: Option<u64>,
    pub q_max: Option<u64>,
    pub seed: Option<u64>,
    pub max_group_order: Option<u64>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
        }
    }
}

struct Resolved {
    scenario: Option<ScenarioSpec>,
    p: Option<u64>,
    q_max: u64,
    seed: u64,
    cap: u64,
    threads: usize,
    cache_dir: Option<PathBuf>,
}

impl Opts {
    fn resolve(&self) -> Result<Resolved> {
        let scenario = match &self.scenario_path {
            Some(path) => Some(ScenarioSpec::load(path)?),
            None => None,
        };
        let s = scenario.as_ref();
        Ok(Resolved {
            p: self.p.or(s.and_then(|s| s.p)),
            q_max: self.q_max.or(s.and_then(|s| s.q_max)).unwrap_or(DEFAULT_Q_MAX),
            seed: self.seed.or(s.and_then(|s| s.seed)).unwrap_or(0),
            cap: self
                .max_group_order
                .or(s.and_then(|s| s.cap))
                .unwrap_or(DEFAULT_CAP),
            threads: self.threads.unwrap_or_else(default_threads),
            cache_dir: self.cache_dir.clone().or_else(|| {
                std::env::var_os("ADEQUACY_CACHE_DIR").map(PathBuf::from)
            }),
            scenario,
        })
    }

    fn finish<T: Serialize>(&self, subcommand: &str, r: &Resolved, result: T) -> Result<String> {
        let config = report::effective_config(
            subcommand,
            self.scenario_path.as_deref(),
            r.scenario.as_ref(),
            r.p,
            Some(r.q_max),
            r.seed,
            r.cap,
            r.threads,
            self.format.as_str(),
            r.cache_dir.as_deref(),
        );
        let envelope = Envelope {
            tool: ToolInfo::current(),
            config,
            result,
        };
        Ok(match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&envelope)
                    .expect("report types serialize without error");
                s.push('\n');
                s
            }
            Format::Text => report::render_text(&envelope),
        })
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn require_scenario(r: &Resolved) -> Result<&ScenarioSpec> {
    r.scenario
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this subcommand needs --scenario PATH".into()))
}

fn require_p(r: &Resolved) -> Result<u64> {
    r.p.ok_or_else(|| Error::InvalidInput("a prime p is needed (flag --p or scenario key \"p\")".into()))
}

/// Build the user-described matrix group, routing through the on-disk cache
/// when a cache directory is configured.
fn custom_group(spec: &ScenarioSpec, r: &Resolved) -> Result<Arc<FiniteGroup>> {
    let gens = spec.group_generators()?;
    let (group, _status) = load_or_build(r.cache_dir.as_deref(), gens, r.cap)?;
    Ok(group)
}

/// The pieces of a wreath scenario: cyclic bottom group of order r with a
/// faithful character over a splitting field of characteristic p, plus the
/// top group generated by `H_gens` with the subgroup from `sub_gens`
/// (trivial when absent).
#[allow(clippy::type_complexity)]
fn wreath_pieces(
    spec: &ScenarioSpec,
    r: &Resolved,
    p: u64,
) -> Result<(Arc<FiniteGroup>, Representation, Arc<FiniteGroup>, Vec<u32>)> {
    let base_order = spec.require_r()?;
    let top = custom_group(spec, r)?;
    let sub = match spec.subgroup_generators()? {
        Some(gens) => top.subgroup_from_elements(&gens)?,
        None => vec![0],
    };
    let bottom = catalog::cyclic(base_order)?;
    let field = Field::new(p, splitting_degree(p, base_order)?)?;
    let zeta = field.element_of_order(base_order)?;
    let images = vec![Matrix::from_scalars(&field, &[vec![zeta]])?; bottom.generator_count()];
    let w = Representation::from_generator_images(Arc::clone(&bottom), field, images)?;
    Ok((bottom, w, top, sub))
}

pub fn cmd_analyze(opts: &Opts) -> Result<String> {
    let r = opts.resolve()?;
    let spec = require_scenario(&r)?;
    let p = require_p(&r)?;
    let report = match spec.kind {
        ScenarioKind::Example1 => {
            let base = spec.require_r()?;
            let a = spec
                .a
                .ok_or_else(|| Error::InvalidInput("example1 needs the exponent a".into()))?;
            let mats = spec.generator_matrices()?;
            let ex = build_example1(base, a, &mats, p, r.cap, r.threads)?;
            analyze(&ex.module, p, r.threads)?
        }
        ScenarioKind::Custom => {
            let modulus = spec.require_r()?;
            if modulus != p {
                return Err(Error::InvalidInput(
                    "custom scenarios analyze the natural module over GF(r), so p must equal r"
                        .into(),
                ));
            }
            let group = custom_group(spec, &r)?;
            let field = Field::new(p, 1)?;
            let rep = Representation::natural(&group, &field)?;
            analyze(&rep, p, r.threads)?
        }
        ScenarioKind::Wreath => {
            let (bottom, w, top, sub) = wreath_pieces(spec, &r, p)?;
            match build_wreath_example(&bottom, &w, &top, &sub, p, r.cap, r.threads)? {
                WreathOutcome::Explicit { module, .. } => analyze(&module, p, r.threads)?,
                WreathOutcome::Implicit { .. } => {
                    return Err(Error::CapExceeded { cap: r.cap });
                }
            }
        }
        ScenarioKind::TaylorOdd | ScenarioKind::TaylorEven | ScenarioKind::Psl2Scan => {
            return Err(Error::InvalidInput(
                "this scenario kind describes a family scan, not a single module; use construct"
                    .into(),
            ));
        }
    };
    opts.finish("analyze", &r, report)
}

pub fn cmd_construct(opts: &Opts) -> Result<String> {
    let r = opts.resolve()?;
    let spec = require_scenario(&r)?;
    let result = match spec.kind {
        ScenarioKind::Example1 => {
            let p = require_p(&r)?;
            let base = spec.require_r()?;
            let a = spec
                .a
                .ok_or_else(|| Error::InvalidInput("example1 needs the exponent a".into()))?;
            let mats = spec.generator_matrices()?;
            match build_example1(base, a, &mats, p, r.cap, r.threads) {
                Ok(ex) => ConstructOut::InducedSemidirect {
                    group_order: ex.group.order(),
                    module_dim: ex.module.dim(),
                    base_size: ex.base_indices.len() as u64,
                    character: ex.character.clone(),
                    obstructed_cosets: ex
                        .obstructions
                        .iter()
                        .map(|obs| CosetOut {
                            representative_index: obs.rep,
                            member_indices: obs.members.clone(),
                            member_orders: obs
                                .members
                                .iter()
                                .map(|&i| ex.group.element_order(i))
                                .collect(),
                        })
                        .collect(),
                    certificate: ex.certificate,
                },
                Err(Error::SearchExhausted(reason)) => ConstructOut::Refused { reason },
                Err(e) => return Err(e),
            }
        }
        ScenarioKind::Wreath => {
            let p = require_p(&r)?;
            let (bottom, w, top, sub) = wreath_pieces(spec, &r, p)?;
            match build_wreath_example(&bottom, &w, &top, &sub, p, r.cap, r.threads) {
                Ok(WreathOutcome::Explicit {
                    group,
                    module,
                    inducing_subgroup,
                    copies,
                    checks,
                    certificate,
                }) => ConstructOut::WreathExplicit {
                    group_order: group.order(),
                    module_dim: module.dim(),
                    copies,
                    inducing_subgroup_order: inducing_subgroup.len() as u64,
                    faithful: checks.faithful,
                    absolutely_irreducible: checks.absolutely_irreducible,
                    full_span: checks.full_span,
                    p_regular_span: checks.p_regular_span,
                    certificate,
                },
                Ok(WreathOutcome::Implicit {
                    base_order,
                    copies,
                    top_order,
                    certificate,
                    ..
                }) => ConstructOut::WreathImplicit {
                    base_order,
                    copies,
                    top_order,
                    certificate,
                },
                Err(Error::SearchExhausted(reason)) => ConstructOut::Refused { reason },
                Err(e) => return Err(e),
            }
        }
        ScenarioKind::TaylorOdd | ScenarioKind::TaylorEven => {
            let p = require_p(&r)?;
            match (spec.kind, p) {
                (ScenarioKind::TaylorEven, q) if q != 2 => {
                    return Err(Error::InvalidInput("taylor_even is the p = 2 family".into()));
                }
                (ScenarioKind::TaylorOdd, 2) => {
                    return Err(Error::InvalidInput("taylor_odd needs an odd prime p".into()));
                }
                _ => {}
            }
            ConstructOut::Taylor(build_taylor_example(p, r.q_max, r.cap, r.threads)?)
        }
        ScenarioKind::Psl2Scan => {
            let p = require_p(&r)?;
            let records = scan_psl2_family(p, r.q_max, r.cap, r.threads, false)?;
            ConstructOut::Psl2Scan {
                records: records.into_iter().map(family_record_out).collect(),
            }
        }
        ScenarioKind::Custom => {
            return Err(Error::InvalidInput(
                "custom scenarios describe a group, not a construction; use analyze, coset-search, or h1"
                    .into(),
            ));
        }
    };
    opts.finish("construct", &r, result)
}

fn family_record_out(record: adequacy_core::constructions::FamilyScanRecord) -> FamilyRecordOut {
    let q = record.q;
    match record.outcome {
        FamilyScanOutcome::Witness(cert) => FamilyRecordOut {
            q,
            outcome: "witness".into(),
            order: None,
            reason: None,
            certificate: Some(*cert),
        },
        FamilyScanOutcome::Absent => FamilyRecordOut {
            q,
            outcome: "absent".into(),
            order: None,
            reason: None,
            certificate: None,
        },
        FamilyScanOutcome::CapSkipped { order } => FamilyRecordOut {
            q,
            outcome: "cap_skipped".into(),
            order: Some(order),
            reason: None,
            certificate: None,
        },
        FamilyScanOutcome::NotApplicable { reason } => FamilyRecordOut {
            q,
            outcome: "not_applicable".into(),
            order: None,
            reason: Some(reason),
            certificate: None,
        },
    }
}

pub fn cmd_coset_search(opts: &Opts) -> Result<String> {
    let r = opts.resolve()?;
    let spec = require_scenario(&r)?;
    let p = require_p(&r)?;
    let (group, subgroup) = match spec.kind {
        ScenarioKind::Custom | ScenarioKind::Wreath => {
            let group = custom_group(spec, &r)?;
            let subgroup = match spec.subgroup_generators()? {
                Some(gens) => group.subgroup_from_elements(&gens)?,
                None => {
                    if group.order() % p != 0 {
                        let result = CosetSearchResult::Absent {
                            cosets_scanned: 0,
                            explanation: format!(
                                "p = {p} does not divide the group order {}, so every element \
                                 is p-regular and no coset can be obstructed",
                                group.order()
                            ),
                        };
                        return opts.finish("coset-search", &r, result);
                    }
                    group.sylow_subgroup(p)
                }
            };
            (group, subgroup)
        }
        ScenarioKind::TaylorEven => {
            if p != 2 {
                return Err(Error::InvalidInput("taylor_even is the p = 2 family".into()));
            }
            let group = psl2(spec.q.unwrap_or(TAYLOR_EVEN_Q), r.cap)?;
            let subgroup = a4_subgroup_psl2(&group)?;
            (group, subgroup)
        }
        ScenarioKind::TaylorOdd => {
            let q = spec
                .q
                .ok_or_else(|| Error::InvalidInput("taylor_odd coset-search needs q".into()))?;
            let group = psl2(q, r.cap)?;
            let subgroup = dihedral_subgroup_psl2(&group, q, p)?;
            (group, subgroup)
        }
        ScenarioKind::Psl2Scan => {
            let q = spec
                .q
                .ok_or_else(|| Error::InvalidInput("psl2_scan coset-search needs q".into()))?;
            let group = psl2(q, r.cap)?;
            if group.order() % p != 0 {
                let result = CosetSearchResult::Absent {
                    cosets_scanned: 0,
                    explanation: format!(
                        "p = {p} does not divide |L2({q})| = {}, so every element is p-regular \
                         and no coset can be obstructed",
                        group.order()
                    ),
                };
                return opts.finish("coset-search", &r, result);
            }
            let subgroup = group.sylow_subgroup(p);
            (group, subgroup)
        }
        ScenarioKind::Example1 => {
            return Err(Error::InvalidInput(
                "example1 already reports its obstructed cosets; use construct".into(),
            ));
        }
    };
    let result = match scan_coset_witness(&group, &subgroup, p, r.threads)? {
        Some(obs) => CosetSearchResult::Witness(WitnessOut {
            group_order: group.order(),
            subgroup_order: subgroup.len() as u64,
            representative_index: obs.rep,
            representative: group.element(obs.rep).to_string(),
            member_orders: obs.members.iter().map(|&i| group.element_order(i)).collect(),
            members: obs.members.iter().map(|&i| group.element(i).to_string()).collect(),
            member_indices: obs.members,
        }),
        None => CosetSearchResult::Absent {
            cosets_scanned: (group.order() / subgroup.len() as u64) as usize,
            explanation: "every left coset of the subgroup contains at least one p-regular element"
                .into(),
        },
    };
    opts.finish("coset-search", &r, result)
}

pub fn cmd_h1(opts: &Opts) -> Result<String> {
    let r = opts.resolve()?;
    let spec = require_scenario(&r)?;
    if spec.kind != ScenarioKind::Custom {
        return Err(Error::InvalidInput(
            "h1 works on custom scenarios (a group given by H_gens)".into(),
        ));
    }
    let p = require_p(&r)?;
    let group = custom_group(spec, &r)?;
    let field = Field::new(p, 1)?;
    let rep = Representation::trivial(Arc::clone(&group), &field);
    let summary = h1_dimension(&rep)?;
    let result = H1Out {
        group_order: group.order(),
        p,
        z1: summary.z1,
        b1: summary.b1,
        h1: summary.h1,
    };
    opts.finish("h1", &r, result)
}

pub fn cmd_census(opts: &Opts, literal: Option<&str>) -> Result<String> {
    let r = opts.resolve()?;
    let result = match literal {
        Some(text) => {
            let (count, dim) = parse_literal(text)?;
            CensusOut::Literal {
                p_regular_count: count,
                dim,
                flagged: cannot_span_by_count(count, dim),
            }
        }
        None => {
            let mut rows = Vec::new();
            for entry in catalog::census_groups()? {
                for &p in &entry.primes {
                    if let Some(wanted) = r.p {
                        if p != wanted {
                            continue;
                        }
                    }
                    let count = count_p_regular(&entry.group, p, r.threads);
                    rows.push(CensusRow {
                        name: entry.name.to_string(),
                        order: entry.group.order(),
                        p,
                        p_regular_count: count,
                        min_flagged_dim: count.isqrt() + 1,
                    });
                }
            }
            if rows.is_empty() {
                return Err(Error::InvalidInput(
                    "no census entry matches the requested p".into(),
                ));
            }
            CensusOut::Catalog { rows }
        }
    };
    opts.finish("census", &r, result)
}

fn parse_literal(text: &str) -> Result<(u64, u64)> {
    let bad = || {
        Error::InvalidInput(format!(
            "--literal takes COUNT,DIM (two decimal integers), got {text:?}"
        ))
    };
    let (count, dim) = text.split_once(',').ok_or_else(bad)?;
    Ok((
        count.trim().parse().map_err(|_| bad())?,
        dim.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Serialize)]
struct ScanOut {
    p: u64,
    q_max: u64,
    stopped_at_first_witness: bool,
    records: Vec<FamilyRecordOut>,
}

pub fn cmd_scan_psl2(opts: &Opts, first: bool) -> Result<String> {
    let r = opts.resolve()?;
    let p = r.p.unwrap_or(2);
    let records = scan_psl2_family(p, r.q_max, r.cap, r.threads, first)?;
    let result = ScanOut {
        p,
        q_max: r.q_max,
        stopped_at_first_witness: first,
        records: records.into_iter().map(family_record_out).collect(),
    };
    opts.finish("scan-psl2", &r, result)
}
