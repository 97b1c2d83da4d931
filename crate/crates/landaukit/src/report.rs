//! Analysis pipeline: run decomposition, matrices, distortion sweeps,
//! contraction cascades, and diagram rendering over a parsed graph, and
//! assemble the results into a deterministic machine report plus a text
//! summary. Seeded runs are byte-reproducible: every value serialized is
//! exact rational text and all maps are key-sorted.

use crate::diagrams::cascade::{contraction_cascade, default_delta_prime, CascadeError, CascadeLog};
use crate::diagrams::{
    build_diagram, check_closure, classify_vr_vl, emit_dot, DiagramError, DiagramParams,
    LandauDiagram, SegmentKind,
};
use crate::feasibility::{distortion_sweep, Certificate, FeasibilityError, SweepConfig, SweepReport};
use crate::fixtures;
use crate::graphfile::{anchor_token, GraphFileError};
use crate::graphs::{
    enumerate_star_graphs, enumerate_zigzag_paths, is_separable, sign_table, DressedGraph, SegRef,
    Side, StarGraph, SIDES,
};
use crate::kinematics::RatVector;
use crate::radial::SectorPoint;
use crate::rat::{rat, rat_i, Rat};
use crate::symbolic::denominators::{build_denominator_set, DenominatorSet};
use crate::symbolic::landau::{landau_matrix, to_k_form, LandauMatrix};
use crate::symbolic::SymbolicError;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const REPORT_SCHEMA: &str = "landaukit-report v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_LANDAU: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Decompose,
    Matrix,
    Check,
    Cascade,
    Diagram,
    Report,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Matrix => "matrix",
            Command::Check => "check",
            Command::Cascade => "cascade",
            Command::Diagram => "diagram",
            Command::Report => "report",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectorSelection {
    All,
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumSelection {
    All,
    List(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub command: Command,
    pub sectors: SectorSelection,
    pub strata: StratumSelection,
    pub samples: usize,
    pub seed: u64,
    /// Soft-photon scale bounding the leading radial coordinate.
    pub delta: Rat,
    /// Contraction shift radius; defaults to the certified bound m/10.
    pub delta_prime: Option<Rat>,
    /// Activity tolerance for the sweep's active-row detection.
    pub tolerance: Rat,
    /// Diagram multipliers file; seeded random multipliers when absent.
    pub params_path: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            command: Command::Report,
            sectors: SectorSelection::All,
            strata: StratumSelection::All,
            samples: 100,
            seed: 0,
            delta: rat(1, 100),
            delta_prime: None,
            tolerance: rat(1, 1_000_000_000),
            params_path: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    GraphFile(#[from] GraphFileError),
    #[error("config error: {0}")]
    Config(String),
    #[error("symbolic stage: {0}")]
    Symbolic(#[from] SymbolicError),
    #[error("feasibility stage: {0}")]
    Feasibility(#[from] FeasibilityError),
    #[error("diagram stage: {0}")]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug)]
pub struct Report {
    pub machine: Value,
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    /// Canonical machine encoding: pretty JSON with sorted keys and a
    /// trailing newline. Byte-identical for identical config and seed.
    pub fn machine_bytes(&self) -> Vec<u8> {
        let mut s = serde_json::to_string_pretty(&self.machine).expect("report serializes");
        s.push('\n');
        s.into_bytes()
    }
}

/// Resolve an input path, honoring the fixture directory override.
pub fn resolve_input(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_owned();
    }
    if path.is_relative() {
        if let Ok(dir) = std::env::var("LANDAUKIT_FIXTURES") {
            let cand = Path::new(&dir).join(path);
            if cand.exists() {
                return cand;
            }
        }
    }
    path.to_owned()
}

fn jvec(v: &RatVector) -> Value {
    json!([
        v.t.to_string(),
        v.x.to_string(),
        v.y.to_string(),
        v.z.to_string()
    ])
}

fn jusize(list: &[usize]) -> Value {
    json!(list)
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Distortion { delta, margin } => json!({
            "kind": "distortion",
            "delta": delta.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "margin": margin.to_string(),
        }),
        Certificate::LandauSolution { alpha, beta } => json!({
            "kind": "landau_solution",
            "alpha": alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "beta": beta.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        }),
    }
}

fn sector_point_json(sp: &SectorPoint) -> Value {
    json!({
        "sector": sp.pi,
        "r": sp.r.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "omega": sp.omega.iter().map(jvec).collect::<Vec<_>>(),
        "delta": sp.delta.to_string(),
    })
}

fn sweep_json(rep: &SweepReport, strata_filter: &[usize]) -> Value {
    let strata: Vec<Value> = rep
        .strata
        .iter()
        .filter(|s| strata_filter.contains(&s.stratum))
        .map(|s| {
            json!({
                "stratum": s.stratum,
                "samples": s.samples,
                "distortions": s.distortions,
                "landau_solutions": s.landau_solutions,
                "min_margin": s.min_margin.as_ref().map(|m| m.to_string()),
                "residue_activated": s.residue_activated,
                "active_rows_total": s.active_rows_total,
                "probes_run": s.probes_run,
                "probes_held": s.probes_held,
                "outcomes": s.outcomes.iter().map(|o| json!({
                    "point": sector_point_json(&o.point),
                    "active_rows": jusize(&o.active_rows),
                    "eta_rows": jusize(&o.eta_rows),
                    "lambda_rows": jusize(&o.lambda_rows),
                    "certificate": certificate_json(&o.certificate),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "strata": strata })
}

fn cascade_json(log: &CascadeLog) -> Value {
    json!({
        "separable": log.separable,
        "stratum": log.stratum,
        "steps": log.steps.iter().map(|s| json!({
            "title": s.title,
            "detail": s.detail,
            "zeroed": s.zeroed,
        })).collect::<Vec<_>>(),
        "hypotheses": log.hypotheses,
        "zeroed": log.zeroed,
        "surviving": log.surviving,
        "all_alpha_zero": log.all_alpha_zero,
    })
}

fn denominators_json(ds: &DenominatorSet) -> Value {
    Value::Array(
        ds.entries
            .iter()
            .map(|d| {
                json!({
                    "label": d.label(),
                    "kind": d.kind.label(),
                    "f": d.f.to_string(),
                    "f_k": d.f_k.as_ref().map(|p| p.to_string()),
                    "scale": d.scale.to_string(),
                    "sigma": d.sigma,
                    "ell": d.ell,
                })
            })
            .collect(),
    )
}

fn diagram_json(d: &LandauDiagram) -> Value {
    let vertices: Vec<Value> = d
        .vertices
        .iter()
        .map(|v| json!({ "label": v.label, "position": jvec(&v.position) }))
        .collect();
    let segments: Vec<Value> = d
        .segments
        .iter()
        .map(|s| {
            let kind = match &s.kind {
                SegmentKind::Photon(i) => format!("photon {}", i + 1),
                SegmentKind::Residue(seg) => {
                    format!("side {} segment {}", seg.side.number(), seg.idx)
                }
                SegmentKind::DirectStar(side) => format!("side {} direct", side.number()),
            };
            json!({
                "kind": kind,
                "from": d.vertices[s.from].label,
                "to": d.vertices[s.to].label,
                "vector": jvec(&s.vector),
            })
        })
        .collect();
    let closure = check_closure(d);
    let cls = classify_vr_vl(d);
    json!({
        "vertices": vertices,
        "segments": segments,
        "closure": {
            "p_residual": jvec(&closure.p_residual),
            "photon_residuals": closure.photon_residuals.iter().map(jvec).collect::<Vec<_>>(),
            "closed": closure.closed,
        },
        "classification": {
            "v_r": cls.v_r.iter().map(|&i| d.vertices[i].label.clone()).collect::<Vec<_>>(),
            "v_l": cls.v_l.iter().map(|&i| d.vertices[i].label.clone()).collect::<Vec<_>>(),
            "condition7": cls.condition7,
            "energy_flow_ok": cls.energy_flow_ok,
        },
        "dot": emit_dot(d),
    })
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

impl SectorSelection {
    fn expand(&self, n: usize) -> Result<Vec<Vec<usize>>, PipelineError> {
        match self {
            SectorSelection::All => {
                if n > 6 {
                    return Err(PipelineError::Config(format!(
                        "{n}! sectors is too many; pass an explicit sector"
                    )));
                }
                Ok(permutations_lex(n.max(0)))
            }
            SectorSelection::Explicit(s) => {
                let mut seen = vec![false; n];
                if s.len() != n
                    || s.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
                {
                    return Err(PipelineError::Config(format!(
                        "sector {s:?} is not a permutation of 0..{n}"
                    )));
                }
                Ok(vec![s.clone()])
            }
        }
    }
}

impl StratumSelection {
    fn expand(&self, n: usize) -> Result<Vec<usize>, PipelineError> {
        match self {
            StratumSelection::All => Ok((0..=n).collect()),
            StratumSelection::List(l) => {
                for &g in l {
                    if g > n {
                        return Err(PipelineError::Config(format!(
                            "stratum {g} exceeds photon count {n}"
                        )));
                    }
                }
                let mut v = l.clone();
                v.sort_unstable();
                v.dedup();
                Ok(v)
            }
        }
    }
}

fn unit_seed(base: u64, ordinal: u64) -> u64 {
    base ^ ordinal.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Canonical chart point used to pick the zero pattern for momentum-form
/// truncation: all radial variables positive except the requested stratum.
fn canonical_sector_point(sector: &[usize], delta: &Rat, stratum: usize) -> SectorPoint {
    let n = sector.len();
    let mut r: Vec<Rat> = (0..n)
        .map(|d| if d == 0 { delta / rat_i(2) } else { rat(1, 2) })
        .collect();
    if stratum >= 1 {
        r[stratum - 1] = Rat::zero();
    }
    SectorPoint {
        pi: sector.to_vec(),
        r,
        omega: vec![RatVector::new(Rat::zero(), Rat::one(), Rat::zero(), Rat::zero()); n],
        delta: delta.clone(),
    }
}

fn parse_seg_key(key: &str) -> Result<SegRef, PipelineError> {
    let bad = || PipelineError::Config(format!("bad segment key '{key}': expected s<side>.<idx>"));
    let rest = key.strip_prefix('s').ok_or_else(bad)?;
    let (side_str, idx_str) = rest.split_once('.').ok_or_else(bad)?;
    let side = match side_str {
        "1" => Side::S1,
        "2" => Side::S2,
        "3" => Side::S3,
        _ => return Err(bad()),
    };
    let idx = idx_str.parse().map_err(|_| bad())?;
    Ok(SegRef { side, idx })
}

fn parse_rat(s: &str) -> Result<Rat, PipelineError> {
    Rat::from_str(s.trim())
        .map_err(|e| PipelineError::Config(format!("bad rational '{s}': {e}")))
}

#[derive(serde::Deserialize)]
struct ParamsFile {
    #[serde(default)]
    alpha_photon: Vec<String>,
    #[serde(default)]
    alpha_star: Option<[String; 3]>,
    #[serde(default)]
    beta: BTreeMap<String, String>,
    #[serde(default)]
    ks: Vec<[String; 4]>,
}

fn load_params(
    path: &Path,
    sg: &StarGraph,
    sector: &[usize],
) -> Result<(DiagramParams, Vec<RatVector>), PipelineError> {
    let text = std::fs::read_to_string(path).map_err(GraphFileError::Io)?;
    let file: ParamsFile =
        serde_json::from_str(&text).map_err(|e| PipelineError::Config(format!("params file: {e}")))?;
    let n = sg.graph.n;
    let mut params = DiagramParams::zero(sg, sector);
    if !file.alpha_photon.is_empty() {
        if file.alpha_photon.len() != n {
            return Err(PipelineError::Config(format!(
                "alpha_photon needs {n} entries"
            )));
        }
        for (i, s) in file.alpha_photon.iter().enumerate() {
            params.alpha_photon[i] = parse_rat(s)?;
        }
    }
    if let Some(stars) = &file.alpha_star {
        for (i, s) in stars.iter().enumerate() {
            params.alpha_star[i] = parse_rat(s)?;
        }
    }
    for (key, val) in &file.beta {
        let seg = parse_seg_key(key)?;
        if !params.beta.contains_key(&seg) {
            return Err(PipelineError::Config(format!(
                "'{key}' is not a residue segment of this term"
            )));
        }
        params.beta.insert(seg, parse_rat(val)?);
    }
    let mut ks = Vec::with_capacity(n);
    if file.ks.is_empty() {
        ks = vec![RatVector::zero(); n];
    } else {
        if file.ks.len() != n {
            return Err(PipelineError::Config(format!("ks needs {n} four-vectors")));
        }
        for comp in &file.ks {
            ks.push(RatVector::new(
                parse_rat(&comp[0])?,
                parse_rat(&comp[1])?,
                parse_rat(&comp[2])?,
                parse_rat(&comp[3])?,
            ));
        }
    }
    Ok((params, ks))
}

fn random_soft_momenta<R: Rng>(n: usize, delta: &Rat, rng: &mut R) -> Vec<RatVector> {
    (0..n)
        .map(|_| {
            RatVector::new(
                delta * rat(rng.gen_range(-4i64..=4), 8),
                delta * rat(rng.gen_range(-4i64..=4), 8),
                delta * rat(rng.gen_range(-4i64..=4), 8),
                delta * rat(rng.gen_range(-4i64..=4), 8),
            )
        })
        .collect()
}

fn graph_json(g: &DressedGraph) -> Value {
    let photons: Vec<Value> = g
        .raw_anchors
        .iter()
        .map(|ends| json!([anchor_token(&ends[0]), anchor_token(&ends[1])]))
        .collect();
    let k_sets: Vec<Value> = SIDES
        .iter()
        .map(|side| {
            let per_seg: Vec<Vec<usize>> = g.k_sets[side.idx()]
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect();
            json!({ "side": side.number(), "segments": per_seg })
        })
        .collect();
    let loops: Vec<Value> = g
        .loops
        .iter()
        .enumerate()
        .map(|(i, lp)| {
            json!({
                "photon": i,
                "entry": format!("s{}.{}", lp.entry.side.number(), lp.entry.pos),
                "exit": format!("s{}.{}", lp.exit.side.number(), lp.exit.pos),
                "segments": lp.segments.iter()
                    .map(|s| format!("s{}.{}", s.side.number(), s.idx))
                    .collect::<Vec<_>>(),
                "vertices": lp.vertices.iter().map(|v| v.label()).collect::<Vec<_>>(),
                "sides": lp.sides.iter().map(|s| s.number()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let zigzags: Vec<Vec<usize>> = enumerate_zigzag_paths(g);
    json!({
        "n": g.n,
        "coupling_count": g.coupling_count,
        "photons": photons,
        "k_sets": k_sets,
        "loops": loops,
        "zigzag_paths": zigzags,
    })
}

fn decompose_unit_json(sg: &StarGraph, sectors: &[Vec<usize>]) -> Value {
    let g = &sg.graph;
    let sides: Vec<Value> = SIDES
        .iter()
        .map(|&side| {
            let star = sg.star_seg(side);
            let segs: Vec<Value> = (0..=g.coupling_count[side.idx()])
                .map(|idx| {
                    let seg = SegRef { side, idx };
                    json!({
                        "idx": idx,
                        "k_set": g.k_set(seg).iter().copied().collect::<Vec<usize>>(),
                        "contracted": g.is_contracted(seg),
                        "star": sg.is_star(seg),
                    })
                })
                .collect();
            json!({
                "side": side.number(),
                "star": star.idx,
                "segments": segs,
            })
        })
        .collect();
    let sign_tables: Vec<Value> = sectors
        .iter()
        .map(|sector| {
            let table = sign_table(sg, sector);
            json!({
                "sector": sector,
                "entries": table.entries.iter().map(|e| json!({
                    "segment": format!("s{}.{}", e.seg.side.number(), e.seg.idx),
                    "sigma": e.sigma,
                    "ell": e.ell,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "stars": sg.stars,
        "separable": is_separable(sg),
        "sides": sides,
        "sign_tables": sign_tables,
    })
}

fn matrix_unit_json(
    ds: &DenominatorSet,
    lm: &LandauMatrix,
    sector: &[usize],
    strata: &[usize],
    delta: &Rat,
) -> Value {
    let mut k_forms = Vec::new();
    for &g in strata {
        let sp = canonical_sector_point(sector, delta, g);
        match to_k_form(lm, &sp) {
            Ok(kf) => k_forms.push(json!({
                "stratum": g,
                "text": kf.render(),
                "omitted_rows": kf.omitted,
            })),
            Err(e) => k_forms.push(json!({
                "stratum": g,
                "skipped": e.to_string(),
            })),
        }
    }
    json!({
        "denominators": denominators_json(ds),
        "matrix_text": lm.render(),
        "row_labels": lm.rows.iter().map(|r| r.den.label()).collect::<Vec<_>>(),
        "k_forms": k_forms,
    })
}

/// Run the configured analysis over a parsed graph.
pub fn run_pipeline(g: &DressedGraph, cfg: &AnalysisConfig) -> Result<Report, PipelineError> {
    let tp = fixtures::symmetric_point();
    let n = g.n;
    let sectors = cfg.sectors.expand(n)?;
    let strata = cfg.strata.expand(n)?;
    if cfg.samples == 0 {
        return Err(PipelineError::Config("samples must be positive".into()));
    }
    if !cfg.delta.is_positive() {
        return Err(PipelineError::Config("delta must be positive".into()));
    }
    let delta_prime = cfg
        .delta_prime
        .clone()
        .unwrap_or_else(|| default_delta_prime(&tp.mass));
    let star_graphs = enumerate_star_graphs(g);

    let mut root = Map::new();
    root.insert("schema".into(), json!(REPORT_SCHEMA));
    root.insert("command".into(), json!(cfg.command.name()));
    let ps = tp.rational_momenta().expect("built-in point is rational");
    root.insert(
        "config".into(),
        json!({
            "samples": cfg.samples,
            "seed": cfg.seed,
            "delta": cfg.delta.to_string(),
            "delta_prime": delta_prime.to_string(),
            "tolerance": cfg.tolerance.to_string(),
            "sectors": sectors,
            "strata": strata,
            "mass": tp.mass.to_string(),
            "external_momenta": ps.iter().map(jvec).collect::<Vec<_>>(),
        }),
    );
    root.insert("graph".into(), graph_json(g));

    let mut text = String::new();
    let _ = writeln!(text, "{REPORT_SCHEMA}: {}", cfg.command.name());
    let _ = writeln!(
        text,
        "graph: {} photon(s), couplings {:?}, {} term(s), {} sector(s), strata {:?}",
        n,
        g.coupling_count,
        star_graphs.len(),
        sectors.len(),
        strata
    );

    let mut any_landau = false;
    let mut any_obstruction = false;
    let mut units = Vec::new();
    let mut ordinal: u64 = 0;

    let want = |c: Command| -> bool { cfg.command == c || cfg.command == Command::Report };

    for sg in &star_graphs {
        let mut unit = Map::new();
        unit.insert("stars".into(), json!(sg.stars));
        unit.insert("separable".into(), json!(is_separable(sg)));
        if want(Command::Decompose) {
            unit.insert(
                "decomposition".into(),
                decompose_unit_json(sg, &sectors),
            );
            if cfg.command == Command::Decompose {
                let _ = writeln!(
                    text,
                    "term {:?}: separable = {}",
                    sg.stars,
                    is_separable(sg)
                );
                for side in SIDES {
                    let segs: Vec<String> = (0..=g.coupling_count[side.idx()])
                        .map(|idx| {
                            let seg = SegRef { side, idx };
                            let mut cell = format!("{idx}");
                            if sg.stars[side.idx()] == idx {
                                cell.push('*');
                            }
                            if sg.graph.is_contracted(seg) {
                                cell.push('c');
                            }
                            cell
                        })
                        .collect();
                    let _ = writeln!(
                        text,
                        "  side {}: segments [{}] (* star, c contracted)",
                        side.number(),
                        segs.join(" ")
                    );
                }
            }
        }
        let mut per_sector = Vec::new();
        for sector in &sectors {
            ordinal += 1;
            let mut sec = Map::new();
            sec.insert("sector".into(), json!(sector));
            let needs_matrix = want(Command::Matrix) || want(Command::Check);
            let built = if needs_matrix {
                let ds = build_denominator_set(sg, sector, &tp.mass)?;
                let lm = landau_matrix(&ds);
                Some((ds, lm))
            } else {
                None
            };
            if want(Command::Matrix) {
                let (ds, lm) = built.as_ref().expect("matrix built");
                if cfg.command == Command::Matrix {
                    let _ = writeln!(text, "term {:?} sector {:?}:", sg.stars, sector);
                    for line in lm.render().lines() {
                        let _ = writeln!(text, "  {line}");
                    }
                }
                sec.insert(
                    "matrix".into(),
                    matrix_unit_json(ds, lm, sector, &strata, &cfg.delta),
                );
            }
            if want(Command::Check) {
                let (ds, lm) = built.as_ref().expect("matrix built");
                let sweep_cfg = SweepConfig {
                    samples: cfg.samples,
                    seed: unit_seed(cfg.seed, ordinal),
                    eps: cfg.tolerance.clone(),
                    delta: cfg.delta.clone(),
                    ..SweepConfig::default()
                };
                let rep = distortion_sweep(ds, lm, &tp, &sweep_cfg)?;
                let all_ok = rep.all_distorted();
                if !all_ok {
                    any_landau = true;
                }
                let verdict = if all_ok {
                    "distortable everywhere sampled"
                } else {
                    "landau solution found"
                };
                for s in rep
                    .strata
                    .iter()
                    .filter(|s| strata.contains(&s.stratum))
                {
                    let _ = writeln!(
                        text,
                        "term {:?} sector {:?} stratum {}: {} samples, {} distorted, {} landau, min margin {}, probes {}/{}",
                        sg.stars,
                        sector,
                        s.stratum,
                        s.samples,
                        s.distortions,
                        s.landau_solutions,
                        s.min_margin
                            .as_ref()
                            .map(|m| m.to_string())
                            .unwrap_or_else(|| "-".into()),
                        s.probes_held,
                        s.probes_run,
                    );
                }
                sec.insert("sweep".into(), sweep_json(&rep, &strata));
                sec.insert("verdict".into(), json!(verdict));
            }
            if want(Command::Cascade) {
                let mut cascades = Vec::new();
                for &stratum in &strata {
                    match contraction_cascade(sg, &tp, sector, stratum, &delta_prime)
                    {
                        Ok(log) => {
                            let _ = writeln!(
                                text,
                                "term {:?} sector {:?} stratum {}: cascade {} in {} step(s){}",
                                sg.stars,
                                sector,
                                stratum,
                                if log.all_alpha_zero {
                                    "contracted every multiplier"
                                } else {
                                    "left multipliers free"
                                },
                                log.steps.len(),
                                if log.surviving.is_empty() {
                                    String::new()
                                } else {
                                    format!("; surviving rows: {}", log.surviving.join(", "))
                                },
                            );
                            cascades.push(json!({
                                "stratum": stratum,
                                "log": cascade_json(&log),
                            }));
                        }
                        Err(CascadeError::ObstructionFound { kind, detail }) => {
                            any_obstruction = true;
                            let _ = writeln!(
                                text,
                                "term {:?} sector {:?} stratum {}: OBSTRUCTION ({kind}): {detail}",
                                sg.stars, sector, stratum,
                            );
                            cascades.push(json!({
                                "stratum": stratum,
                                "obstruction": { "kind": kind, "detail": detail },
                            }));
                        }
                        Err(CascadeError::Invalid(msg)) => {
                            return Err(PipelineError::Config(msg));
                        }
                    }
                }
                sec.insert("cascades".into(), Value::Array(cascades));
            }
            if want(Command::Diagram) {
                let (params, ks) = match &cfg.params_path {
                    Some(p) => load_params(p, sg, sector)?,
                    None => {
                        let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(cfg.seed, ordinal));
                        let params = DiagramParams::random(sg, sector, &mut rng);
                        let ks = random_soft_momenta(n, &cfg.delta, &mut rng);
                        (params, ks)
                    }
                };
                let d = build_diagram(sg, &params, &tp, &ks)?;
                let dj = diagram_json(&d);
                let _ = writeln!(
                    text,
                    "term {:?} sector {:?}: diagram with {} vertices, {} segments, closed = {}",
                    sg.stars,
                    sector,
                    d.vertices.len(),
                    d.segments.len(),
                    dj["closure"]["closed"],
                );
                sec.insert("diagram".into(), dj);
            }
            per_sector.push(Value::Object(sec));
        }
        unit.insert("sectors".into(), Value::Array(per_sector));
        units.push(Value::Object(unit));
    }
    root.insert("units".into(), Value::Array(units));

    let exit_code = if any_obstruction {
        EXIT_OBSTRUCTION
    } else if any_landau {
        EXIT_LANDAU
    } else {
        EXIT_OK
    };
    let verdict = match exit_code {
        EXIT_OBSTRUCTION => "obstruction found",
        EXIT_LANDAU => "landau solution found",
        _ => match cfg.command {
            Command::Check | Command::Report => "all sampled points distortable",
            _ => "ok",
        },
    };
    root.insert(
        "summary".into(),
        json!({ "verdict": verdict, "exit_code": exit_code }),
    );
    let _ = writeln!(text, "summary: {verdict}; exit {exit_code}");

    Ok(Report {
        machine: Value::Object(root),
        text,
        exit_code,
    })
}

/// Convenience wrapper: parse the graph file (resolving the fixture
/// directory override) and run.
pub fn run_pipeline_on_file(path: &Path, cfg: &AnalysisConfig) -> Result<Report, PipelineError> {
    let resolved = resolve_input(path);
    let g = crate::graphfile::parse_graph_file(&resolved)?;
    run_pipeline(&g, cfg)
}
