//! One function per module operation; each returns the verdict and payload.

use ample::coarse::{
    coarse_map_check, cocycle_to_map, map_to_cocycle, maximal_refuter, properness_profile,
    replay_refutation, ulf_profile, PairLabelling,
};
use ample::dr::{
    build_dr_truncation, cylinder_diff, cylinder_meet, flam_cocycle, purity_check_graph,
    purity_check_kgraph, same_degree_delta_bar_h, verify_diff, DrTruncation, KGraph, KPurity, Path,
};
use ample::gpd::{find_isomorphism, Groupoid, IsoSearch};
use ample::grp::{Element, GroupHandle, GroupKind, QuotientChain};
use ample::hls::{
    build_afs, build_hls, delta_violation_witness, equicontinuity_certificate, fiber_reports,
    hls_vs_partial_action_iso,
};
use ample::kzero::{
    independent_loops_check, paradoxical_witness, realize_class, snf_oracle, verify_paradoxical,
    CompactOpen, KzeroError,
};
use ample::pact::{
    build_transformation_groupoid, canonical_delta_h, check_pure_cocycle, delta_audit, PactError,
    PartialActionSpec, Purity,
};
use serde_json::{json, Value};

use crate::report::{first_difference, render_json, Outcome, Report, Verdict, TOOL_VERSION};
use crate::schema::{
    elements, from_value, ChainDoc, CoarseDoc, GraphDoc, GroupDoc, GroupoidDoc, Loader, MapDoc,
    PactionDoc,
};
use crate::{
    Budgets, ChainPreset, CliError, CoarseOp, Command, DocKind, DrOp, GpdOp, GrpOp, HlsOp, KzeroOp,
    Labelling, PactOp,
};

// Fallbacks when neither flags, environment nor config set a budget.
pub const DEFAULT_N: usize = 1;
const DEFAULT_L: usize = 1;
const DEFAULT_DEPTH: usize = 2;
const DEFAULT_ISO_NODES: usize = 1_000_000;
const DEFAULT_PURITY_BUDGET: usize = 10_000;
const DEFAULT_LABELS: usize = 64;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn dispatch(cmd: &Command, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate { kind, file } => validate(*kind, file, loader),
        Command::Grp(GrpOp::Ball { group }) => grp_ball(group, b, loader),
        Command::Grp(GrpOp::Export { .. }) => Err(usage("export prints a document, not a report")),
        Command::Gpd(GpdOp::Iso { left, right }) => gpd_iso(left, right, b, loader),
        Command::Pact(op) => pact(op, loader),
        Command::Hls(op) => hls(op, b, loader),
        Command::Dr(op) => dr(op, b, loader),
        Command::Coarse(op) => coarse(op, b, loader),
        Command::Kzero(op) => kzero(op, b, loader),
        Command::Replay { report } => replay(report, loader),
    }
}

pub fn export_chain(preset: ChainPreset, rank: usize, depth: usize) -> Result<ChainDoc, CliError> {
    let chain = match preset {
        ChainPreset::Z => QuotientChain::z_chain(depth),
        ChainPreset::F2 => QuotientChain::f2_chain(depth),
        ChainPreset::Oplus => QuotientChain::oplus_z2_chain(rank, depth).map_err(usage)?,
    };
    Ok(ChainDoc::from_chain(&chain))
}

fn fail_with(kind: &'static str, error: impl std::fmt::Display, witness: Value) -> Outcome {
    Outcome::new(
        kind,
        Verdict::Fail,
        json!({ "error": error.to_string(), "witness": witness }),
    )
}

fn validate(kind: DocKind, file: &str, loader: &mut Loader) -> Result<Outcome, CliError> {
    const K: &str = "validate";
    Ok(match kind {
        DocKind::Group => {
            let doc: GroupDoc = loader.load(file)?;
            match doc.build(file, "") {
                Ok(g) => Outcome::new(K, Verdict::Pass, group_summary(&g)),
                Err(CliError::Input {
                    pointer, message, ..
                }) if pointer == "/table" => fail_with(K, message, json!({ "field": "table" })),
                Err(e) => return Err(e),
            }
        }
        DocKind::Chain => {
            let doc: ChainDoc = loader.load(file)?;
            match doc.build(file)? {
                Ok(c) => Outcome::new(
                    K,
                    Verdict::Pass,
                    json!({
                        "base": group_summary(c.base()),
                        "depth": c.depth(),
                        "orders": c.levels().iter().map(|l| l.group.order()).collect::<Vec<_>>(),
                        "assumed_faithful": c.assumed_faithful,
                    }),
                ),
                Err(msg) => fail_with(K, &msg, json!({ "check": "levels", "detail": msg })),
            }
        }
        DocKind::Groupoid => {
            let doc: GroupoidDoc = loader.load(file)?;
            match doc.build() {
                Ok(g) => Outcome::new(
                    K,
                    Verdict::Pass,
                    json!({ "arrows": g.arrow_count(), "units": g.unit_count() }),
                ),
                Err(e) => fail_with(K, &e, json!({ "check": format!("{e:?}") })),
            }
        }
        DocKind::Paction => {
            let doc: PactionDoc = loader.load(file)?;
            let (group, raw) = doc.raw(file)?;
            match PartialActionSpec::new(group, doc.points, raw) {
                Ok(spec) => Outcome::new(
                    K,
                    Verdict::Pass,
                    json!({ "points": spec.points(), "support": spec.entries().len() }),
                ),
                Err(e) => match pact_witness(&e) {
                    Some(w) => fail_with(K, &e, w),
                    None => {
                        return Err(CliError::Input {
                            file: file.into(),
                            pointer: String::new(),
                            message: e.to_string(),
                        })
                    }
                },
            }
        }
        DocKind::Graph | DocKind::Kgraph => {
            let doc: GraphDoc = loader.load(file)?;
            match doc.build() {
                Ok(g) => Outcome::new(
                    K,
                    Verdict::Pass,
                    json!({ "vertices": g.vertex_count(), "edges": g.edges().len(), "rank": g.rank() }),
                ),
                Err(e) => fail_with(K, &e, json!({ "check": format!("{e:?}") })),
            }
        }
        DocKind::Coarse => {
            let doc: CoarseDoc = loader.load(file)?;
            let checked = doc.space().and_then(|s| match doc.family() {
                Some(f) => f.map(|f| (s, Some(f.windows().len()))),
                None => Ok((s, None)),
            });
            match checked {
                Ok((s, windows)) => Outcome::new(
                    K,
                    Verdict::Pass,
                    json!({ "points": s.points(), "connected": s.is_connected(), "ulf": ulf_profile(&s), "windows": windows }),
                ),
                Err(e) => fail_with(K, &e, json!({ "check": format!("{e:?}") })),
            }
        }
    })
}

/// Axiom failures become witnesses; malformed entries stay input errors.
fn pact_witness(e: &PactError) -> Option<Value> {
    let suggestion = |s: &Option<Box<PartialActionSpec>>| {
        s.as_ref()
            .map(|s| serde_json::to_value(PactionDoc::from_spec(s).support).expect("serializes"))
    };
    Some(match e {
        PactError::Axiom2 {
            gamma,
            eta,
            x,
            suggestion: s,
        } => {
            json!({ "axiom": 2, "gamma": gamma, "eta": eta, "x": x, "completed_support": suggestion(s) })
        }
        PactError::Axiom3 { gamma, eta, x } => {
            json!({ "axiom": 3, "gamma": gamma, "eta": eta, "x": x })
        }
        PactError::InverseMismatch {
            gamma,
            suggestion: s,
        } => {
            json!({ "axiom": "inverse", "gamma": gamma, "completed_support": suggestion(s) })
        }
        PactError::IdentityNotTrivial => json!({ "axiom": 1 }),
        PactError::NotBijective { gamma, detail } => {
            json!({ "axiom": "bijective", "gamma": gamma, "detail": detail })
        }
        _ => return None,
    })
}

fn group_summary(g: &GroupHandle) -> Value {
    let kind = match g.kind() {
        GroupKind::Free { .. } => "free",
        GroupKind::FreeAbelian { .. } => "free_abelian",
        GroupKind::Finite(_) => "finite",
        GroupKind::Chain(_) => "chain",
    };
    json!({ "kind": kind, "rank": g.rank(), "order": g.order(), "labels": g.labels() })
}

fn grp_ball(file: &str, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    let doc: GroupDoc = loader.load(file)?;
    let g = doc.build(file, "")?;
    let radius = b.l.unwrap_or(DEFAULT_L);
    let ball = g
        .ball(&g.standard_generators(), radius as i64)
        .map_err(usage)?;
    let entries: Vec<Value> = ball
        .iter()
        .map(|e| json!({ "word": g.format_word(&e.word), "path": g.format_word(&e.path) }))
        .collect();
    Ok(Outcome::new(
        "grp.ball",
        Verdict::Pass,
        json!({ "radius": radius, "size": ball.len(), "elements": entries }),
    ))
}

fn gpd_iso(left: &str, right: &str, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    let mut side = |file: &str| -> Result<_, CliError> {
        let doc: GroupoidDoc = loader.load(file)?;
        doc.build().map_err(|e| CliError::Input {
            file: file.into(),
            pointer: String::new(),
            message: e.to_string(),
        })
    };
    let (g, h) = (side(left)?, side(right)?);
    let budget = b.search.unwrap_or(DEFAULT_ISO_NODES);
    const K: &str = "gpd.iso";
    Ok(match find_isomorphism(&g, &h, budget) {
        IsoSearch::Found {
            unit_map,
            arrow_map,
            nodes,
        } => Outcome::new(
            K,
            Verdict::Pass,
            json!({ "unit_map": unit_map, "arrow_map": arrow_map, "nodes": nodes }),
        ),
        IsoSearch::NotIsomorphic { reason, nodes } => Outcome::new(
            K,
            Verdict::Fail,
            json!({ "witness": { "reason": reason }, "nodes": nodes }),
        ),
        IsoSearch::Exhausted { budget } => {
            Outcome::new(K, Verdict::Inconclusive, json!({ "budget": budget }))
        }
    })
}

fn load_paction(file: &str, loader: &mut Loader) -> Result<PartialActionSpec, CliError> {
    let doc: PactionDoc = loader.load(file)?;
    let (group, raw) = doc.raw(file)?;
    PartialActionSpec::new(group, doc.points, raw).map_err(|e| CliError::Input {
        file: file.into(),
        pointer: "/support".into(),
        message: e.to_string(),
    })
}

fn pact(op: &PactOp, loader: &mut Loader) -> Result<Outcome, CliError> {
    match op {
        PactOp::Groupoid { paction } => {
            let spec = load_paction(paction, loader)?;
            let tg = build_transformation_groupoid(&spec).map_err(usage)?;
            let group = spec.group();
            let arrows: Vec<Value> = tg
                .arrows
                .iter()
                .enumerate()
                .map(|(a, &(entry, x))| {
                    let e = &spec.entries()[entry];
                    json!({
                        "id": a,
                        "gamma": group.format_word(&e.word),
                        "source": x,
                        "range": e.map[&x],
                        "value": group.format_element(&tg.cocycle.values[a]),
                    })
                })
                .collect();
            let pure =
                check_pure_cocycle(&tg.groupoid, &tg.cocycle).map_err(usage)? == Purity::Pure;
            Ok(Outcome::new(
                "pact.groupoid",
                Verdict::Pass,
                json!({ "units": tg.groupoid.unit_count(), "arrows": arrows, "pure": pure }),
            ))
        }
        PactOp::Delta { paction } => {
            let spec = load_paction(paction, loader)?;
            let tg = build_transformation_groupoid(&spec).map_err(usage)?;
            let g = &tg.groupoid;
            let h = canonical_delta_h(&tg);
            let units: Vec<usize> = (0..g.unit_count()).collect();
            let all: Vec<usize> = (0..g.arrow_count()).collect();
            let a = delta_audit(g, &h, &units, &all, Some(&tg.cocycle)).map_err(usage)?;
            let verdict = if a.within_bound() == Some(true) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(Outcome::new(
                "pact.delta",
                verdict,
                json!({
                    "h_size": h.len(),
                    "left_size": a.left_size,
                    "right_size": a.right_size,
                    "left_fib": a.left_fib,
                    "right_fib": a.right_fib,
                    "bound": a.bound,
                    "projection_size": a.projection_size,
                }),
            ))
        }
    }
}

fn load_chain(file: &str, loader: &mut Loader) -> Result<QuotientChain, CliError> {
    let doc: ChainDoc = loader.load(file)?;
    doc.build(file)?.map_err(|message| CliError::Input {
        file: file.into(),
        pointer: "/levels".into(),
        message,
    })
}

fn hls(op: &HlsOp, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    let n = b.n.unwrap_or(DEFAULT_N);
    let l = b.l.unwrap_or(DEFAULT_L) as i64;
    match op {
        HlsOp::Build { chain } => {
            let chain = load_chain(chain, loader)?;
            let t = build_hls(&chain, n).map_err(usage)?;
            Ok(Outcome::new(
                "hls.build",
                Verdict::Pass,
                json!({
                    "n": n,
                    "arrows": t.groupoid.arrow_count(),
                    "units": t.groupoid.unit_count(),
                    "levels": fiber_reports(&t, n),
                }),
            ))
        }
        HlsOp::Afs { chain } => {
            let chain = load_chain(chain, loader)?;
            let t = build_afs(&chain, n).map_err(usage)?;
            Ok(Outcome::new(
                "hls.afs",
                Verdict::Pass,
                json!({
                    "n": n,
                    "arrows": t.groupoid.arrow_count(),
                    "units": t.groupoid.unit_count(),
                    "levels": fiber_reports(&t, n),
                }),
            ))
        }
        HlsOp::Witness { chain } => {
            let chain = load_chain(chain, loader)?;
            let s = chain.base().standard_generators();
            let cert = delta_violation_witness(&chain, &s, l, n).map_err(usage)?;
            cert.verify(&chain).map_err(usage)?;
            Ok(Outcome::new(
                "hls.witness",
                Verdict::Evidence,
                json!({ "bound": cert.fiber_lower_bound, "certificate": cert }),
            ))
        }
        HlsOp::Equicont { chain, level } => {
            let chain = load_chain(chain, loader)?;
            let k = level.unwrap_or(n);
            let order = chain.level(k).map_err(usage)?.order();
            let cover: Vec<(usize, usize)> = (0..order).map(|g| (k, g)).collect();
            let s = chain.base().standard_generators();
            let cert = equicontinuity_certificate(&chain, n, &s, l, &vec![0; n + 1], &cover)
                .map_err(usage)?;
            let verdict = if cert.ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(Outcome::new("hls.equicont", verdict, cert))
        }
        HlsOp::Iso { chain } => {
            let chain = load_chain(chain, loader)?;
            let cert = hls_vs_partial_action_iso(&chain, n, b.search.unwrap_or(DEFAULT_ISO_NODES))
                .map_err(usage)?;
            let verdict = match cert.outcome.as_str() {
                "Found" => Verdict::Pass,
                "NotIsomorphic" => Verdict::Fail,
                _ => Verdict::Inconclusive,
            };
            Ok(Outcome::new("hls.iso", verdict, cert))
        }
    }
}

fn load_graph(file: &str, loader: &mut Loader) -> Result<KGraph, CliError> {
    let doc: GraphDoc = loader.load(file)?;
    doc.build().map_err(|e| CliError::Input {
        file: file.into(),
        pointer: String::new(),
        message: e.to_string(),
    })
}

fn format_pair(t: &DrTruncation, arrow: usize) -> [String; 2] {
    let (a, b) = t.pair(arrow);
    [t.graph.format_path(a), t.graph.format_path(b)]
}

fn dr(op: &DrOp, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    let depth = b.depth.unwrap_or(DEFAULT_DEPTH);
    match op {
        DrOp::Cylinders { graph, mu, nu } => {
            let g = load_graph(graph, loader)?;
            let parse = |s: &str| g.parse_path(s).map_err(usage);
            let (mu, nu) = (parse(mu)?, parse(nu)?);
            let pieces = cylinder_diff(&g, &mu, &nu);
            let check = verify_diff(&g, &mu, &nu, &pieces);
            let fmt = |ps: &[Path]| ps.iter().map(|p| g.format_path(p)).collect::<Vec<_>>();
            let verdict = if check.disjoint && check.union_exact {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(Outcome::new(
                "dr.cylinders",
                verdict,
                json!({
                    "meet": fmt(&cylinder_meet(&g, &mu, &nu)),
                    "difference": fmt(&pieces),
                    "check": check,
                }),
            ))
        }
        DrOp::Cocycle { graph } => {
            let g = load_graph(graph, loader)?;
            let t = build_dr_truncation(&g, depth).map_err(usage)?;
            let edges = GroupHandle::new(
                GroupKind::Free {
                    rank: g.edges().len(),
                },
                Some(g.edge_labels().to_vec()),
            )
            .unwrap_or_else(|_| GroupHandle::free(g.edges().len()));
            let arrows: Vec<Value> = (0..t.arrows.len())
                .map(|a| {
                    json!({
                        "pair": format_pair(&t, a),
                        "value": edges.format_word(&flam_cocycle(&t, a)),
                        "degree": t.degree(a),
                    })
                })
                .collect();
            Ok(Outcome::new(
                "dr.cocycle",
                Verdict::Pass,
                json!({ "depth": depth, "arrows": arrows }),
            ))
        }
        DrOp::Purity { graph } => {
            let g = load_graph(graph, loader)?;
            let t = build_dr_truncation(&g, depth).map_err(usage)?;
            const K: &str = "dr.purity";
            if g.rank() == 1 {
                return Ok(match purity_check_graph(&t) {
                    Ok(cert) => Outcome::new(K, Verdict::Pass, cert),
                    Err(e) => fail_with(K, &e, json!({ "depth": depth })),
                });
            }
            let p = purity_check_kgraph(&t, b.search.unwrap_or(DEFAULT_PURITY_BUDGET))
                .map_err(usage)?;
            let verdict = match p {
                KPurity::PureUpTo { .. } => Verdict::Pass,
                KPurity::Witness { .. } => Verdict::Fail,
                KPurity::Inconclusive { .. } => Verdict::Inconclusive,
            };
            Ok(Outcome::new(K, verdict, p))
        }
        DrOp::Delta { graph } => {
            let g = load_graph(graph, loader)?;
            let t = build_dr_truncation(&g, depth).map_err(usage)?;
            let units: Vec<usize> = (0..t.groupoid.unit_count()).collect();
            let all: Vec<usize> = (0..t.groupoid.arrow_count()).collect();
            let a = same_degree_delta_bar_h(&t, &units, &all).map_err(usage)?;
            let verdict = if a.subgroupoid && a.contains_diagonal && a.left_size <= a.window_bound {
                Verdict::Evidence
            } else {
                Verdict::Fail
            };
            Ok(Outcome::new(
                "dr.delta",
                verdict,
                json!({
                    "depth": a.depth,
                    "h_size": a.h.len(),
                    "subgroupoid": a.subgroupoid,
                    "contains_diagonal": a.contains_diagonal,
                    "degree_window": a.degree_window,
                    "left_size": a.left_size,
                    "right_size": a.right_size,
                    "left_fib": a.left_fib,
                    "right_fib": a.right_fib,
                    "window_bound": a.window_bound,
                }),
            ))
        }
    }
}

fn load_map(file: &str, loader: &mut Loader) -> Result<(GroupHandle, Vec<Element>), CliError> {
    let doc: MapDoc = loader.load(file)?;
    let group = doc.group.build(file, "/group")?;
    let values = elements(&group, &doc.values, file, "/values")?;
    Ok((group, values))
}

fn load_space(
    file: &str,
    loader: &mut Loader,
) -> Result<ample::coarse::FiniteCoarseSpace, CliError> {
    let doc: CoarseDoc = loader.load(file)?;
    doc.space().map_err(|e| CliError::Input {
        file: file.into(),
        pointer: "/generators".into(),
        message: e.to_string(),
    })
}

fn coarse(op: &CoarseOp, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    match op {
        CoarseOp::Check { space, map } => {
            let s = load_space(space, loader)?;
            let (group, f) = load_map(map, loader)?;
            let r = coarse_map_check(&s, &group, &f, b.search.unwrap_or(DEFAULT_LABELS))
                .map_err(usage)?;
            let verdict = if r.injective {
                Verdict::Evidence
            } else {
                Verdict::Fail
            };
            Ok(Outcome::new("coarse.check", verdict, r))
        }
        CoarseOp::Roundtrip {
            space,
            map,
            basepoint,
        } => {
            let s = load_space(space, loader)?;
            let (group, f) = load_map(map, loader)?;
            let wc = map_to_cocycle(&s, &group, &f).map_err(usage)?;
            let back = cocycle_to_map(&wc, *basepoint).map_err(usage)?;
            let shift = group.inv(&f[*basepoint]).map_err(usage)?;
            let mut mismatch = None;
            for &x in &back.component {
                let want = group.mul(&f[x], &shift).map_err(usage)?;
                if back.values[x].as_ref() != Some(&want) {
                    mismatch = Some(x);
                    break;
                }
            }
            let recovered: Vec<Option<String>> = back
                .values
                .iter()
                .map(|v| v.as_ref().map(|e| group.format_element(e)))
                .collect();
            let verdict = if mismatch.is_none() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(Outcome::new(
                "coarse.roundtrip",
                verdict,
                json!({
                    "basepoint": basepoint,
                    "component": back.component,
                    "connected": back.connected,
                    "recovered": recovered,
                    "mismatch": mismatch,
                }),
            ))
        }
        CoarseOp::Refute { map } => {
            let (group, f) = load_map(map, loader)?;
            let r = maximal_refuter(&group, &f).map_err(usage)?;
            replay_refutation(&group, &f, &r).map_err(usage)?;
            Ok(Outcome::new("coarse.refute", Verdict::Evidence, r))
        }
        CoarseOp::Profile {
            labelling,
            windows,
            gamma,
        } => {
            let ls: Vec<PairLabelling> = windows
                .iter()
                .map(|&n| match labelling {
                    Labelling::Z => PairLabelling::z_window(n),
                    Labelling::F2 => PairLabelling::f2_window(n),
                })
                .collect();
            let group = match ls.first() {
                Some(l) => l.group.clone(),
                None => return Err(usage("at least one window is needed")),
            };
            let gammas = gamma
                .iter()
                .map(|s| group.parse_word(s).and_then(|w| group.canonical(&w)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            Ok(Outcome::new(
                "coarse.profile",
                Verdict::Evidence,
                properness_profile(&ls, &gammas),
            ))
        }
    }
}

fn kzero_error(file: &str, e: KzeroError) -> CliError {
    CliError::Input {
        file: file.into(),
        pointer: String::new(),
        message: e.to_string(),
    }
}

fn kzero(op: &KzeroOp, b: &Budgets, loader: &mut Loader) -> Result<Outcome, CliError> {
    match op {
        KzeroOp::Oracle { graph } => {
            let g = load_graph(graph, loader)?;
            let k0 = snf_oracle(&g).map_err(|e| kzero_error(graph, e))?;
            let loops = independent_loops_check(&g).map_err(|e| kzero_error(graph, e))?;
            Ok(Outcome::new(
                "kzero.oracle",
                Verdict::Pass,
                json!({
                    "group": k0.describe(),
                    "order": k0.order(),
                    "invariants": k0,
                    "snf_verified": k0.verified(),
                    "vertex_classes": (0..g.vertex_count())
                        .map(|v| { let mut e = vec![0; g.vertex_count()]; e[v] = 1; k0.class_of(&e) })
                        .collect::<Vec<_>>(),
                    "independent_loops": loops.ok,
                }),
            ))
        }
        KzeroOp::Witness { graph, vertex } => {
            let g = load_graph(graph, loader)?;
            snf_oracle(&g).map_err(|e| kzero_error(graph, e))?;
            let vertices: Vec<usize> = match vertex {
                Some(v) if *v < g.vertex_count() => vec![*v],
                Some(v) => return Err(usage(format!("vertex {v} out of range"))),
                None => (0..g.vertex_count()).collect(),
            };
            let mut out = Vec::new();
            for v in vertices {
                let o = CompactOpen::cylinder(Path::vertex(v));
                match paradoxical_witness(&g, &o) {
                    Ok(w) => {
                        verify_paradoxical(&g, &w).map_err(usage)?;
                        out.push(json!({
                            "vertex": v,
                            "left": w.left.format(&g),
                            "right": w.right.format(&g),
                            "witness": w,
                        }));
                    }
                    Err(KzeroError::NoIndependentLoops { vertex }) => {
                        return Ok(Outcome::new(
                            "kzero.witness",
                            Verdict::Inconclusive,
                            json!({ "no_independent_loops": vertex }),
                        ));
                    }
                    Err(e) => return Err(usage(e)),
                }
            }
            Ok(Outcome::new(
                "kzero.witness",
                Verdict::Pass,
                json!({ "paradoxical": out }),
            ))
        }
        KzeroOp::Realize { graph, target } => {
            let g = load_graph(graph, loader)?;
            let k0 = snf_oracle(&g).map_err(|e| kzero_error(graph, e))?;
            if target.len() != g.vertex_count() {
                return Err(usage(format!(
                    "target has {} entries for {} vertices",
                    target.len(),
                    g.vertex_count()
                )));
            }
            let class = k0.class_of(target);
            Ok(match realize_class(&g, &k0, &class, b.search) {
                Ok(r) => Outcome::new(
                    "kzero.realize",
                    Verdict::Pass,
                    json!({ "set": r.result.format(&g), "class": class, "realization": r }),
                ),
                Err(KzeroError::Budget { budget }) => Outcome::new(
                    "kzero.realize",
                    Verdict::Inconclusive,
                    json!({ "budget": budget }),
                ),
                Err(e) => return Err(usage(e)),
            })
        }
    }
}

/// Re-runs the recorded command on the embedded inputs and compares the
/// fresh report with the recorded one.
fn replay(file: &str, loader: &mut Loader) -> Result<Outcome, CliError> {
    let recorded_value = loader.raw(file)?;
    let recorded: Report = from_value(file, recorded_value.clone())?;
    let version_mismatch = recorded.tool_version != TOOL_VERSION;
    let mut inner = Loader::embedded(&recorded.replay.inputs);
    let fresh = crate::run(
        &recorded.replay.command,
        &recorded.replay.budgets,
        &mut inner,
    );
    let mut fresh = match fresh {
        Ok(r) => r,
        Err(e) => {
            return Ok(Outcome::new(
                "replay",
                Verdict::Fail,
                json!({ "verified": false, "error": e.to_string(), "version_mismatch": version_mismatch }),
            ));
        }
    };
    if version_mismatch {
        fresh.tool_version = recorded.tool_version.clone();
    }
    let fresh_value = fresh.to_value();
    let verified = render_json(&fresh_value) == render_json(&recorded_value);
    let divergence = first_difference(&recorded_value, &fresh_value).map(|path| {
        let at = |v: &Value| v.pointer(&path).cloned().unwrap_or(Value::Null);
        json!({ "path": path, "recorded": at(&recorded_value), "reproduced": at(&fresh_value) })
    });
    Ok(Outcome::new(
        "replay",
        if verified {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        json!({
            "verified": verified,
            "divergence": divergence,
            "version_mismatch": version_mismatch,
            "recorded_version": recorded.tool_version,
            "recorded_kind": recorded.kind,
            "recorded_verdict": recorded.verdict,
        }),
    ))
}
