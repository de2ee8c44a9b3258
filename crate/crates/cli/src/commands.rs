use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use arbor::arn::{
    build_arn, compatibility_tree, gtree_isomorphic, verify_arn_conditions, ArnCandidate, Color,
};
use arbor::cubing::{build_cubing, reposition_vgp, CubeComplex, CubingCaps, Point, Ultrafilter};
use arbor::dot::{bipartite_dot, cubing_dot, tree_dot};
use arbor::dunwoody::{build_tree, verify_realization};
use arbor::freegrp::{intersection_number, run_probe, sigma_ball, ProbeInput, ProbeMode, ProbeOutcome, SpecSet};
use arbor::io::{PocsetDoc, SCHEMA};
use arbor::pocset::{star, OrderMode, Pocset};
use arbor::{Error, Result};
use serde_json::{json, Map, Value};

use crate::{Cli, Command, Mode, Opts, EXIT_INVALID, EXIT_OK, EXIT_STRUCTURAL};

struct Outcome {
    report: Map<String, Value>,
    /// Extra files for `--out`, as (file name, contents).
    files: Vec<(String, String)>,
    code: u8,
}

impl Outcome {
    fn new(ok: bool) -> Self {
        Outcome { report: Map::new(), files: Vec::new(), code: if ok { EXIT_OK } else { EXIT_INVALID } }
    }

    fn put(&mut self, key: &str, v: impl serde::Serialize) -> &mut Self {
        self.report.insert(key.to_string(), serde_json::to_value(v).expect("reports serialize"));
        self
    }

    fn file(&mut self, name: &str, text: String) -> &mut Self {
        self.files.push((name.to_string(), text));
        self
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Dunwoody { .. } => "dunwoody",
        Command::Cubing { .. } => "cubing",
        Command::Arn { .. } => "arn",
        Command::Inumber { .. } => "inumber",
        Command::Compat { .. } => "compat",
        Command::Vgp { .. } => "vgp",
        Command::SigmaBall { .. } => "sigma-ball",
        Command::Probe { .. } => "probe",
    }
}

pub fn run(cli: &Cli) -> u8 {
    let name = command_name(&cli.command);
    let mut report = Map::new();
    report.insert("schema".into(), SCHEMA.into());
    report.insert("command".into(), name.into());
    let (files, code) = match dispatch(&cli.command, &cli.opts) {
        Ok(o) => {
            report.extend(o.report);
            (o.files, o.code)
        }
        Err(e) => {
            let kind = if e.is_structural() { "structural" } else { "validation" };
            report.insert("error".into(), json!({ "kind": kind, "message": e.to_string() }));
            (Vec::new(), if e.is_structural() { EXIT_STRUCTURAL } else { EXIT_INVALID })
        }
    };
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("reports serialize") + "\n";
    print!("{text}");
    if let Some(dir) = &cli.opts.out {
        let written = fs::create_dir_all(dir).and_then(|_| {
            fs::write(dir.join("report.json"), &text)?;
            for (f, contents) in &files {
                fs::write(dir.join(f), contents)?;
            }
            Ok(())
        });
        if let Err(e) = written {
            eprintln!("arbor: cannot write to {}: {e}", dir.display());
            return EXIT_STRUCTURAL;
        }
    }
    code
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn load_pocset(path: &Path) -> Result<Pocset> {
    PocsetDoc::from_json(&read(path)?)?.build()
}

fn load_specs(path: &Path) -> Result<SpecSet> {
    SpecSet::from_json(&read(path)?)
}

fn order_mode(m: Mode) -> OrderMode {
    match m {
        Mode::Subset => OrderMode::Subset,
        Mode::Almost => OrderMode::Almost,
    }
}

fn caps(o: &Opts) -> CubingCaps {
    CubingCaps { max_vertices: o.max_vertices as usize, max_dim: o.max_dim as usize }
}

/// The pocset of a command taking either `--pocset` or `--specs` with a radius.
fn pocset_or_ball(pocset: &Option<std::path::PathBuf>, specs: &Option<std::path::PathBuf>, o: &Opts) -> Result<Pocset> {
    match (pocset, specs) {
        (Some(p), _) => load_pocset(p),
        (None, Some(s)) => Ok(sigma_ball(&load_specs(s)?, o.radius, !o.permissive)?.pocset),
        (None, None) => Err(Error::Malformed("one of --pocset or --specs is required".into())),
    }
}

fn almost_cubing(p: &Pocset, o: &Opts) -> Result<CubeComplex> {
    let c = build_cubing(p, OrderMode::Almost, None, caps(o))?;
    if c.is_partial() {
        return Err(Error::Unsupported("the cubing hit a cap; raise --max-vertices or --max-dim".into()));
    }
    Ok(c)
}

fn dispatch(cmd: &Command, o: &Opts) -> Result<Outcome> {
    match cmd {
        Command::Validate { pocset, nested } => {
            let doc = PocsetDoc::from_json(&read(pocset)?)?;
            let r = doc.validate(*nested)?;
            let mut out = Outcome::new(r.ok);
            out.put("pairs", doc.elements.len()).put("report", r);
            Ok(out)
        }
        Command::Dunwoody { pocset } => {
            let p = load_pocset(pocset)?;
            let t = build_tree(&p)?;
            let v = verify_realization(&t, &p);
            let mut out = Outcome::new(v.ok);
            out.put("counts", json!({ "vertices": t.vertex_count(), "edges": t.edge_count() }))
                .put("tree", &t)
                .put("verification", v)
                .file("tree.dot", tree_dot(&t));
            Ok(out)
        }
        Command::Cubing { pocset } => {
            let p = load_pocset(pocset)?;
            let c = build_cubing(&p, order_mode(o.mode), None, caps(o))?;
            let mut out = Outcome::new(true);
            out.put("mode", c.mode).put("counts", cubing_counts(&c)).put(
                "partial",
                json!({ "vertex_cap_hit": c.vertex_cap_hit, "dim_truncated": c.dim_truncated }),
            );
            let vertices: Vec<Vec<&str>> =
                c.vertices.iter().map(|u| u.chosen().map(|id| c.names[id].as_str()).collect()).collect();
            let hyperplanes: Vec<Value> = c
                .hyperplanes
                .iter()
                .map(|h| json!({ "element": c.names[2 * h.pair], "edges": h.edges }))
                .collect();
            out.put("vertices", vertices)
                .put("edges", &c.edges)
                .put("cubes", &c.cubes)
                .put("hyperplanes", hyperplanes)
                .file("cubing.dot", cubing_dot(&c));
            Ok(out)
        }
        Command::Arn { pocset, specs, candidate, candidate_file } => {
            let p = pocset_or_ball(pocset, specs, o)?;
            let c = almost_cubing(&p, o)?;
            let arn = build_arn(&p, &c)?;
            let mut candidates = Vec::new();
            if let Some(base) = candidate {
                let pair = p.id_of(base)? / 2;
                let part = "candidate".to_string();
                candidates.push(ArnCandidate { pocset: p.with_parallel_copy(pair, &part)?, part });
            }
            if let Some(path) = candidate_file {
                let q = load_pocset(path)?;
                let new: Vec<&String> = q.parts().iter().filter(|x| p.part_index(x).is_none()).collect();
                match new.as_slice() {
                    [part] => candidates.push(ArnCandidate { part: part.to_string(), pocset: q.clone() }),
                    _ => return Err(Error::Malformed("a candidate adds exactly one new part".into())),
                }
            }
            let r = verify_arn_conditions(&arn, &p, &c, &candidates);
            let mut out = Outcome::new(r.ok());
            out.put(
                "counts",
                json!({
                    "v0": arn.tree.count(Color::V0),
                    "v1": arn.tree.count(Color::V1),
                    "edges": arn.tree.edges.len(),
                    "blocks": arn.decomposition.blocks.len(),
                    "cut_vertices": arn.decomposition.cut_vertices.len(),
                }),
            )
            .put("decomposition", &arn.decomposition)
            .put("tree", &arn.tree)
            .put("conditions", &r)
            .file("arn.dot", bipartite_dot(&arn.tree));
            Ok(out)
        }
        Command::Inumber { specs, pair } => {
            let set = load_specs(specs)?;
            let r = intersection_number(&set, &pair[0], &pair[1], o.radius)?;
            let mut out = Outcome::new(true);
            if let Value::Object(m) = serde_json::to_value(&r).expect("reports serialize") {
                out.report.extend(m);
            }
            Ok(out)
        }
        Command::Compat { pocset, specs, multiplicities } => {
            let p = pocset_or_ball(pocset, specs, o)?;
            let mut m = BTreeMap::new();
            for s in multiplicities {
                let (part, k) = s
                    .split_once('=')
                    .and_then(|(a, k)| Some((a.to_string(), k.parse::<usize>().ok().filter(|&k| k > 0)?)))
                    .ok_or_else(|| Error::Malformed(format!("multiplicity {s} is not PART=K with K > 0")))?;
                m.insert(part, k);
            }
            let ct = compatibility_tree(&p, &m)?;
            let mut out = Outcome::new(ct.collapses.iter().all(|c| c.ok));
            out.put("edge_orbits", ct.edge_orbits)
                .put("collapses", &ct.collapses)
                .put("counts", json!({ "vertices": ct.tree.vertex_count(), "edges": ct.tree.edge_count() }))
                .put("tree", &ct.tree)
                .file("compat.dot", tree_dot(&ct.tree));
            Ok(out)
        }
        Command::Vgp { pocset, points } => vgp(&load_pocset(pocset)?, &read(points)?, o),
        Command::SigmaBall { specs } => {
            let set = load_specs(specs)?;
            let b = sigma_ball(&set, o.radius, !o.permissive)?;
            let doc = PocsetDoc::from_pocset(&b.pocset);
            let mut out = Outcome::new(true);
            out.put(
                "counts",
                json!({ "pairs": b.elements.len(), "aliases": b.aliases.len(), "excluded": b.excluded.len() }),
            )
            .put("ball", &b)
            .put("crossing_pairs", b.crossing_pairs())
            .put("pocset", &doc)
            .file("pocset.json", doc.to_json() + "\n");
            Ok(out)
        }
        Command::Probe { specs, probe, spec_names, subgroup, translate, point } => {
            let set = load_specs(specs)?;
            let mode = ProbeMode::parse(probe)?;
            let word = |w: &str| set.alphabet.parse(w);
            let input = ProbeInput {
                specs: spec_names.clone(),
                subgroup: subgroup.iter().map(|w| word(w)).collect::<Result<_>>()?,
                translate: translate.as_deref().map(word).transpose()?,
                point: point.as_deref().map(word).transpose()?,
            };
            let r = run_probe(&set, mode, &input, o.radius)?;
            let mut out = Outcome::new(r.outcome != ProbeOutcome::Fails);
            if let Value::Object(m) = serde_json::to_value(&r).expect("reports serialize") {
                out.report.extend(m);
            }
            Ok(out)
        }
    }
}

fn cubing_counts(c: &CubeComplex) -> Value {
    let mut counts = json!({
        "vertices": c.vertices.len(),
        "edges": c.edges.len(),
        "squares": c.squares().len(),
        "hyperplanes": c.hyperplanes.len(),
        "dimension": c.dimension(),
    });
    for (i, cubes) in c.cubes.iter().enumerate().skip(1) {
        counts[format!("cubes_{}", i + 2)] = cubes.len().into();
    }
    counts
}

/// Points file: `{"w": ["A*", "B"], "points": [{"name": "e", "pullback": {"A": "A", "B": "B"},
/// "membership": ["A*", "B"]}]}`. Pullbacks are given on bases; missing bases leave the
/// fragment. `membership` lists the element of each pair holding the point. Without
/// `points`, a single fixed point `e` is used.
fn vgp(p: &Pocset, text: &str, o: &Opts) -> Result<Outcome> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let strings = |v: &Value, what: &str| -> Result<Vec<String>> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(format!("{what}: {e}")))
    };
    let w_names = strings(v.get("w").ok_or_else(|| Error::Malformed("points file needs w".into()))?, "w")?;
    let w_refs: Vec<&str> = w_names.iter().map(String::as_str).collect();
    let w = Ultrafilter::from_names(p, OrderMode::Almost, &w_refs)?;
    let mut points = Vec::new();
    match v.get("points").and_then(Value::as_array) {
        None => points.push(Point { name: "e".into(), pullback: (0..p.n_elements()).map(Some).collect(), membership: None }),
        Some(list) => {
            for pt in list {
                let name = pt.get("name").and_then(Value::as_str).unwrap_or("").to_string();
                let mut pullback = vec![None; p.n_elements()];
                if let Some(m) = pt.get("pullback").and_then(Value::as_object) {
                    for (base, img) in m {
                        let a = p.id_of(base)?;
                        let b = p.id_of(img.as_str().ok_or_else(|| Error::Malformed(format!("pullback of {base}")))?)?;
                        pullback[a] = Some(b);
                        pullback[star(a)] = Some(star(b));
                    }
                }
                let membership = match pt.get("membership") {
                    None => None,
                    Some(m) => {
                        let ids = strings(m, "membership")?.iter().map(|s| p.id_of(s)).collect::<Result<Vec<_>>>()?;
                        Some((0..p.n_elements()).map(|a| ids.contains(&a)).collect())
                    }
                };
                points.push(Point { name, pullback, membership });
            }
        }
    }
    let r = reposition_vgp(p, &w, &points)?;
    let mut out = Outcome::new(r.ok());
    out.put("result", &r);
    if let Some(q) = &r.repositioned {
        out.put("repositioned", PocsetDoc::from_pocset(q));
        let before = almost_cubing(p, o).and_then(|c| build_arn(p, &c));
        let after = almost_cubing(q, o).and_then(|c| build_arn(q, &c));
        let same = match (before, after) {
            (Ok(a), Ok(b)) => Some(gtree_isomorphic(&a.tree, &b.tree, o.color_strict).is_some()),
            _ => None,
        };
        out.put("arn_isomorphic", same);
    }
    Ok(out)
}
