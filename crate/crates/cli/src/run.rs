use std::collections::BTreeMap;
use std::thread;

use dirac_fem::analysis::{
    classify_levels, coincidence_report, convergence_study, tau_balance_residual, tau_limit_lambda,
    ClassifiedEntry, CoincidenceReport, ConvergenceStudy, Label, LimitRoot,
};
use dirac_fem::assembly::write_triplets;
use dirac_fem::discretization::MeshSpec;
use dirac_fem::{
    assemble, bound_states, compute_tau, reference_binding, solve, Mesh, OperatorParams,
    PotentialModel, Scheme, Spectrum,
};
use serde::Serialize;

use crate::config::{KappaSelection, Mode, Nucleus, RunConfig};
use crate::error::CliError;

/// Everything a run produces.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub result: Outcome,
    /// Matrix dumps as `(file suffix, contents)`, written with the output.
    #[serde(skip)]
    pub dumps: Vec<(String, Vec<u8>)>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Solve(LevelTable),
    CompareSchemes(LevelTable),
    Convergence(Vec<KappaConvergence>),
    Coincidence(CoincidenceOutcome),
    VerifyTau(TauReport),
}

/// One classified series.
#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub kappa: i32,
    pub scheme: Scheme,
    pub entries: Vec<ClassifiedEntry<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cell {
    pub binding: f64,
    pub label: Label,
    pub rel_error: Option<f64>,
}

/// One table row. Interleaved rows (`level == None`) hold spurious values
/// found between two physical levels.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub level: Option<usize>,
    pub reference: Option<f64>,
    pub cells: Vec<Option<Cell>>,
    pub label: Label,
    pub coincidence: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub coincidence: bool,
}

impl LevelTable {
    pub fn interleaved_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.level.is_none()).count()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaConvergence {
    pub kappa: i32,
    pub study: ConvergenceStudy<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceOutcome {
    pub positive_kappa: i32,
    pub negative_kappa: i32,
    pub report: CoincidenceReport<f64>,
}

/// Limit analysis on one interior node.
#[derive(Debug, Clone, Serialize)]
pub struct TauRow {
    pub node: usize,
    pub h_j: f64,
    pub h_next: f64,
    pub tau: f64,
    /// Balance residual divided by `(81/4900) h_{j+1}^2`.
    pub balance_residual: f64,
    pub gap_tau: f64,
    pub gap_zero: f64,
    pub lambda1_real: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauReport {
    pub c: f64,
    pub rows: Vec<TauRow>,
    pub max_balance_residual: f64,
    pub improved: usize,
}

fn potential(cfg: &RunConfig) -> Result<PotentialModel<f64>, CliError> {
    Ok(match cfg.nucleus {
        Nucleus::Point => PotentialModel::point(cfg.z),
        Nucleus::Extended => PotentialModel::extended(cfg.z, cfg.radius.unwrap_or(f64::NAN))?,
    })
}

fn params(cfg: &RunConfig, kappa: i32) -> Result<OperatorParams<f64>, CliError> {
    Ok(OperatorParams::with_constants(
        cfg.mass, cfg.c, cfg.z, kappa,
    )?)
}

fn mesh_spec(cfg: &RunConfig) -> MeshSpec<f64> {
    MeshSpec::new(cfg.a, cfg.b, cfg.mesh_gamma)
}

struct Solved {
    kappa: i32,
    scheme: Scheme,
    spectrum: Spectrum<f64>,
    entries: Vec<ClassifiedEntry<f64>>,
    dumps: Vec<(String, Vec<u8>)>,
}

fn solve_series(
    cfg: &RunConfig,
    mesh: &Mesh<f64>,
    kappa: i32,
    scheme: Scheme,
    dump: bool,
) -> Result<Solved, CliError> {
    let params = params(cfg, kappa)?;
    let system = assemble(
        scheme,
        &params,
        mesh,
        &potential(cfg)?,
        cfg.free_lower_slope,
    )?;
    let spectrum = solve(&system, cfg.reality_tol)?;
    bound_states(&spectrum, &params, cfg.levels)?;
    let classified = classify_levels(
        &spectrum.bindings,
        &params,
        cfg.levels,
        cfg.match_tol_for(scheme),
    )?;
    let mut dumps = Vec::new();
    if dump {
        for (name, matrix) in [("lhs", &system.lhs), ("rhs", &system.rhs)] {
            let mut text = Vec::new();
            write_triplets(matrix, &mut text).map_err(|e| CliError::Output(e.to_string()))?;
            dumps.push((format!("kappa{kappa}.{scheme}.{name}.txt"), text));
        }
    }
    Ok(Solved {
        kappa,
        scheme,
        spectrum,
        entries: classified.classified.entries,
        dumps,
    })
}

/// Solves every `(kappa, scheme)` pair concurrently; results keep the input order.
fn solve_all(
    cfg: &RunConfig,
    mesh: &Mesh<f64>,
    jobs: &[(i32, Scheme)],
) -> Result<Vec<Solved>, CliError> {
    let dump = cfg.dump.is_some();
    let results: Vec<Result<Solved, CliError>> = thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(kappa, scheme)| s.spawn(move || solve_series(cfg, mesh, kappa, scheme, dump)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    results.into_iter().collect()
}

fn severity(label: Label) -> u8 {
    match label {
        Label::Genuine | Label::CoincidenceSpurious => 0,
        Label::Unmatched => 1,
        Label::InstilledSpurious => 2,
    }
}

/// Places each classified value on a table slot: physical level `l` is
/// `n_r + 1`, a coincidence copy sits on level 1, and instilled values go
/// on an interleaved row before the next level.
fn slots(entries: &[ClassifiedEntry<f64>]) -> BTreeMap<(usize, u8, usize), Cell> {
    let mut out = BTreeMap::new();
    let mut last = 0;
    let mut gap = 0;
    for e in entries {
        let cell = Cell {
            binding: e.binding,
            label: e.label,
            rel_error: e.rel_error,
        };
        let level = match e.label {
            Label::Genuine => e.reference.map_or(last + 1, |r| r.n_r as usize + 1),
            Label::CoincidenceSpurious => 1,
            Label::Unmatched => last + 1,
            Label::InstilledSpurious => {
                out.insert((last + 1, 0, gap), cell);
                gap += 1;
                continue;
            }
        };
        if out.contains_key(&(level, 1, 0)) {
            out.insert((level, 0, gap), cell);
            gap += 1;
        } else {
            out.insert((level, 1, 0), cell);
            last = level;
            gap = 0;
        }
    }
    out
}

fn level_table(cfg: &RunConfig, solved: Vec<Solved>) -> Result<LevelTable, CliError> {
    let reference_kappa = match cfg.kappa {
        KappaSelection::Single(k) => k,
        KappaSelection::Pair(k) => -(k as i32),
    };
    let reference_params = params(cfg, reference_kappa)?;
    let per_column: Vec<_> = solved.iter().map(|s| slots(&s.entries)).collect();
    let mut keys: Vec<(usize, u8, usize)> = per_column
        .iter()
        .flat_map(|m| m.keys().copied())
        .filter(|&(level, _, _)| level <= cfg.levels)
        .collect();
    keys.sort_unstable();
    keys.dedup();

    let mut rows = Vec::with_capacity(keys.len());
    for (level, kind, gap) in keys {
        let cells: Vec<Option<Cell>> = per_column
            .iter()
            .map(|m| m.get(&(level, kind, gap)).copied())
            .collect();
        let interleaved = kind == 0;
        let reference = if interleaved {
            None
        } else {
            reference_binding(&reference_params, level as u32 - 1)
                .ok()
                .map(|r| r.binding)
        };
        let label = cells
            .iter()
            .flatten()
            .map(|c| c.label)
            .max_by_key(|&l| severity(l))
            .map_or(Label::Genuine, |l| {
                if l == Label::CoincidenceSpurious {
                    Label::Genuine
                } else {
                    l
                }
            });
        let coincidence = cells
            .iter()
            .flatten()
            .any(|c| c.label == Label::CoincidenceSpurious);
        rows.push(Row {
            level: (!interleaved).then_some(level),
            reference,
            cells,
            label,
            coincidence,
        });
    }
    let coincidence = rows.iter().any(|r| r.coincidence);
    let columns = solved
        .into_iter()
        .map(|s| Column {
            kappa: s.kappa,
            scheme: s.scheme,
            entries: s.entries,
        })
        .collect();
    Ok(LevelTable {
        columns,
        rows,
        coincidence,
    })
}

fn verify_tau(cfg: &RunConfig) -> Result<TauReport, CliError> {
    let mesh = mesh_spec(cfg).build(cfg.n)?;
    let tau = compute_tau(&mesh);
    let mut rows = Vec::new();
    for j in 1..=mesh.interior_count() {
        let (h_j, h_next) = (mesh.h(j), mesh.h(j + 1));
        if h_j == h_next {
            continue;
        }
        let t = tau.values()[j];
        let with = tau_limit_lambda(h_j, h_next, t, cfg.c)?;
        let without = tau_limit_lambda(h_j, h_next, 0.0, cfg.c)?;
        let scale = 81.0 / 4900.0 * h_next * h_next;
        rows.push(TauRow {
            node: j,
            h_j,
            h_next,
            tau: t,
            balance_residual: tau_balance_residual(h_j, h_next, t) / scale,
            gap_tau: with.relative_gap(cfg.c),
            gap_zero: without.relative_gap(cfg.c),
            lambda1_real: matches!(with, LimitRoot::Real(_)),
        });
    }
    let max_balance_residual = rows
        .iter()
        .map(|r| r.balance_residual.abs())
        .fold(0.0, f64::max);
    let improved = rows.iter().filter(|r| r.gap_tau < r.gap_zero).count();
    Ok(TauReport {
        c: cfg.c,
        rows,
        max_balance_residual,
        improved,
    })
}

/// Executes the configured mode. Nothing is written here.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    // Physics invariants are reported before any mesh or solver problem.
    for k in cfg.kappa.kappas() {
        params(cfg, k)?;
    }
    potential(cfg)?;

    let mut dumps = Vec::new();
    let result = match cfg.mode {
        Mode::Solve | Mode::CompareSchemes => {
            let mesh = mesh_spec(cfg).build(cfg.n)?;
            let schemes: Vec<Scheme> = if cfg.mode == Mode::Solve {
                vec![cfg.scheme]
            } else {
                Scheme::ALL.to_vec()
            };
            let jobs: Vec<(i32, Scheme)> = cfg
                .kappa
                .kappas()
                .into_iter()
                .flat_map(|k| schemes.iter().map(move |&s| (k, s)))
                .collect();
            let mut solved = solve_all(cfg, &mesh, &jobs)?;
            dumps.extend(solved.iter_mut().flat_map(|s| std::mem::take(&mut s.dumps)));
            let table = level_table(cfg, solved)?;
            if cfg.mode == Mode::Solve {
                Outcome::Solve(table)
            } else {
                Outcome::CompareSchemes(table)
            }
        }
        Mode::Convergence => {
            let spec = mesh_spec(cfg);
            let pot = potential(cfg)?;
            let kappas = cfg.kappa.kappas();
            let results: Vec<Result<KappaConvergence, CliError>> = thread::scope(|s| {
                let handles: Vec<_> = kappas
                    .iter()
                    .map(|&kappa| {
                        let spec = &spec;
                        let pot = &pot;
                        s.spawn(move || {
                            let p = params(cfg, kappa)?;
                            let study = convergence_study(
                                cfg.scheme,
                                &p,
                                pot,
                                spec,
                                &cfg.n_values,
                                cfg.levels,
                                cfg.match_tol_for(cfg.scheme),
                                cfg.reality_tol,
                            )?;
                            Ok(KappaConvergence { kappa, study })
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("solver thread panicked"))
                    .collect()
            });
            Outcome::Convergence(results.into_iter().collect::<Result<_, _>>()?)
        }
        Mode::Coincidence => {
            let k = cfg.kappa.abs() as i32;
            let mesh = mesh_spec(cfg).build(cfg.n)?;
            let jobs = [(k, cfg.scheme), (-k, cfg.scheme)];
            let mut solved = solve_all(cfg, &mesh, &jobs)?;
            dumps.extend(solved.iter_mut().flat_map(|s| std::mem::take(&mut s.dumps)));
            let mut report = coincidence_report(
                &solved[0].spectrum,
                &solved[1].spectrum,
                cfg.match_tol_for(cfg.scheme),
            );
            report.pairs.truncate(cfg.levels);
            Outcome::Coincidence(CoincidenceOutcome {
                positive_kappa: k,
                negative_kappa: -k,
                report,
            })
        }
        Mode::VerifyTau => Outcome::VerifyTau(verify_tau(cfg)?),
    };
    Ok(Report {
        config: cfg.clone(),
        result,
        dumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dirac_fem::ReferenceLevel;

    fn genuine(binding: f64, kappa: i32, n_r: u32) -> ClassifiedEntry<f64> {
        ClassifiedEntry {
            binding,
            label: Label::Genuine,
            reference: Some(ReferenceLevel {
                kappa,
                n_r,
                binding,
            }),
            rel_error: Some(0.0),
        }
    }

    fn other(binding: f64, label: Label) -> ClassifiedEntry<f64> {
        ClassifiedEntry {
            binding,
            label,
            reference: None,
            rel_error: None,
        }
    }

    #[test]
    fn slot_layout_follows_levels() {
        let positive = [
            other(-0.5, Label::CoincidenceSpurious),
            genuine(-0.125, 1, 1),
            genuine(-0.055, 1, 2),
            other(-0.032, Label::InstilledSpurious),
            genuine(-0.031, 1, 3),
        ];
        let keys: Vec<_> = slots(&positive).into_keys().collect();
        assert_eq!(
            keys,
            vec![(1, 1, 0), (2, 1, 0), (3, 1, 0), (4, 0, 0), (4, 1, 0)]
        );
    }
}
