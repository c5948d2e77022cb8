use std::fmt::Write as _;

use serde_json::{json, Value};

use nilgenus::constructions::{
    acyclic_group, fibre_product, genus_check, higman_group, link_group_a2, non_residual_nilpotence_witness,
    surface_group, ClassOutcome, GenusReport,
};
use nilgenus::homcalc::{abelianization, complex_homology_mod_p, fox_derivatives, show_ring_element};
use nilgenus::l2betti::{build_tower, luck_estimate, TowerStrategy};
use nilgenus::nilquot::{nilpotent_quotient, Verdict};
use nilgenus::subgroups::{low_index_with_jobs, reidemeister_schreier, todd_coxeter};
use nilgenus::words::{check_hom, GroupHom};
use nilgenus::{Caps, Error, Presentation, Word};

use crate::report::{Input, Status};
use crate::{Command, TowerKind};

pub struct Outcome {
    pub inputs: Vec<Input>,
    pub status: Status,
    pub result: Option<Value>,
    pub error: Option<String>,
    pub text: String,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn status_of(e: &Error) -> Status {
    match e {
        _ if e.is_cap() => Status::Capped,
        Error::NotAHomomorphism { .. } | Error::NotInKernel(_) => Status::Negative,
        _ => Status::UsageError,
    }
}

struct Run {
    inputs: Vec<Input>,
}

impl Run {
    fn load(&mut self, path: &str) -> Result<Presentation, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        self.inputs.push(Input::new(path, &bytes));
        let text = String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{path}: not UTF-8")))?;
        Presentation::parse(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

type Done = (Status, Value, String);

pub fn run(cmd: &Command, caps: &Caps, jobs: usize) -> Outcome {
    let mut r = Run { inputs: vec![] };
    let res = dispatch(&mut r, cmd, caps, jobs);
    let inputs = r.inputs;
    match res {
        Ok((status, result, text)) => Outcome {
            inputs,
            status,
            result: Some(result),
            error: None,
            text,
        },
        Err(Failure::Input(msg)) => Outcome {
            inputs,
            status: Status::UsageError,
            result: None,
            error: Some(msg),
            text: String::new(),
        },
        Err(Failure::Lib(e)) => Outcome {
            inputs,
            status: status_of(&e),
            result: None,
            error: Some(e.to_string()),
            text: String::new(),
        },
    }
}

fn dispatch(r: &mut Run, cmd: &Command, caps: &Caps, jobs: usize) -> Result<Done, Failure> {
    match cmd {
        Command::Abel { file } => {
            let p = r.load(file)?;
            let a = abelianization(&p);
            let text = format!("{a}\n");
            Ok((
                Status::Ok,
                json!({ "free_rank": a.free_rank, "torsion": a.torsion, "group": a.to_string() }),
                text,
            ))
        }
        Command::Nq { class, file } => {
            let p = r.load(file)?;
            nq(&p, *class, caps)
        }
        Command::LowIndex { max, normal, file } => {
            let p = r.load(file)?;
            let found = low_index_with_jobs(&p, *max, *normal, jobs)?;
            let mut text = String::new();
            let mut subs = Vec::new();
            for rec in &found {
                let gens: Vec<String> = rec.table.subgroup_generators().iter().map(|w| p.show(w)).collect();
                let action: Vec<Vec<usize>> = (0..p.rank())
                    .map(|g| rec.table.permutation(g).iter().map(|&c| c + 1).collect())
                    .collect();
                let _ = writeln!(
                    text,
                    "index {:>3}{}  <{}>",
                    rec.index,
                    if rec.normal { " normal" } else { "       " },
                    gens.join(", ")
                );
                subs.push(json!({ "index": rec.index, "normal": rec.normal, "generators": gens, "action": action }));
            }
            let _ = writeln!(text, "{} subgroup classes", found.len());
            Ok((Status::Ok, json!({ "count": found.len(), "subgroups": subs }), text))
        }
        Command::Rs { subgroup, file } => {
            let p = r.load(file)?;
            let gens = subgroup
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|w| p.parse_word(w))
                .collect::<Result<Vec<Word>, Error>>()?;
            let t = todd_coxeter(&p, &gens, caps.max_cosets)?;
            let (sub, words) = reidemeister_schreier(&p, &t)?;
            let gens_json: Vec<Value> = sub
                .names()
                .iter()
                .zip(&words)
                .map(|(n, w)| json!({ "name": n, "word": p.show(w) }))
                .collect();
            let ab = abelianization(&sub);
            let mut text = format!("index {}\n{}", t.index(), sub.serialize());
            for (n, w) in sub.names().iter().zip(&words) {
                let _ = writeln!(text, "# {n} = {}", p.show(w));
            }
            let _ = writeln!(text, "# abelianization {ab}");
            Ok((
                Status::Ok,
                json!({
                    "index": t.index(),
                    "presentation": sub.serialize(),
                    "generators": gens_json,
                    "abelianization": { "free_rank": ab.free_rank, "torsion": ab.torsion },
                }),
                text,
            ))
        }
        Command::L2 {
            tower,
            depth,
            prime,
            file,
        } => {
            let p = r.load(file)?;
            let strategy = match tower {
                TowerKind::PCongruence => TowerStrategy::PCongruence(*prime),
                TowerKind::MOfD => TowerStrategy::MOfD,
            };
            let t = build_tower(&p, &strategy, *depth, caps)?;
            let e = luck_estimate(&p, &t, jobs)?;
            let mut text = String::new();
            let mut steps = Vec::new();
            for (i, label) in t.labels.iter().enumerate() {
                let ratio = e.ratios[i].to_string();
                let _ = writeln!(
                    text,
                    "{label:>8}  index {:>5}  b1 {:>5}  ratio {ratio}",
                    e.indices[i], e.betti[i]
                );
                steps.push(json!({ "label": label, "index": e.indices[i], "b1": e.betti[i], "ratio": ratio }));
            }
            for n in &e.notes {
                let _ = writeln!(text, "# {n}");
            }
            Ok((
                Status::Ok,
                json!({ "strategy": t.strategy, "steps": steps, "notes": e.notes }),
                text,
            ))
        }
        Command::Fibre { rank, q, class, depth } => {
            let qp = r.load(q)?;
            if qp.rank() != *rank {
                return Err(Error::InvalidArgument(format!("{q} has {} generators, expected {rank}", qp.rank())).into());
            }
            let fp = fibre_product(&qp, *depth)?;
            let gens: Vec<Value> = fp
                .partial
                .names()
                .iter()
                .zip(&fp.generators)
                .map(|(n, w)| json!({ "name": n, "word": fp.product.show(w) }))
                .collect();
            let mut text = String::new();
            for (n, w) in fp.partial.names().iter().zip(&fp.generators) {
                let _ = writeln!(text, "{n} = {}", fp.product.show(w));
            }
            let mut result = json!({
                "rank": rank,
                "product": fp.product.serialize(),
                "generators": gens,
                "cover_depth": fp.depth,
                "cover_relators": fp.partial.relators().len(),
            });
            let mut status = Status::Ok;
            if let Some(c) = class {
                let g = genus_check(&fp.inclusion, *c, caps, jobs)?;
                status = genus_status(&g);
                text.push_str(&genus_text(&g));
                result["genus"] = serde_json::to_value(&g).expect("report serializes");
            }
            Ok((status, result, text))
        }
        Command::GenusCheck {
            class,
            hom,
            target,
            file,
        } => {
            let p = r.load(file)?;
            let h = match target {
                Some(t) => {
                    let tp = r.load(t)?;
                    GroupHom::from_spec(&p, &tp, hom)?
                }
                None => GroupHom::quotient_by_spec(&p, hom)?,
            };
            let cert = check_hom(&h, *class, caps)?;
            let g = genus_check(&cert, *class, caps, jobs)?;
            let images: Vec<Value> = p
                .names()
                .iter()
                .zip(&h.images)
                .map(|(n, w)| json!({ "generator": n, "image": h.target.show(w) }))
                .collect();
            let text = genus_text(&g);
            Ok((
                genus_status(&g),
                json!({
                    "target": h.target.serialize(),
                    "images": images,
                    "certification": cert.certification,
                    "report": g,
                }),
                text,
            ))
        }
        Command::FoxH2 { p: prime, file } => {
            let p = r.load(file)?;
            let dims = complex_homology_mod_p(&p, *prime)?;
            let fox: Vec<Vec<String>> = fox_derivatives(&p)
                .entries
                .iter()
                .map(|row| row.iter().map(|e| show_ring_element(e, p.names())).collect())
                .collect();
            let mut text = String::new();
            for (i, row) in fox.iter().enumerate() {
                let _ = writeln!(text, "r{}: {}", i + 1, row.join(" | "));
            }
            let _ = writeln!(text, "mod {prime}: h0 {} h1 {} h2 {}", dims.h0, dims.h1, dims.h2);
            Ok((
                Status::Ok,
                json!({
                    "prime": prime,
                    "h0": dims.h0,
                    "h1": dims.h1,
                    "h2": dims.h2,
                    "euler_characteristic": dims.euler_characteristic(),
                    "fox_matrix": fox,
                }),
                text,
            ))
        }
        Command::Witness {
            retraction,
            candidate,
            class,
            search_index,
            file,
        } => {
            let p = r.load(file)?;
            let h = GroupHom::quotient_by_spec(&p, retraction)?;
            let cert = check_hom(&h, *class, caps)?;
            let w = p.parse_word(candidate)?;
            let rep = non_residual_nilpotence_witness(&cert, &w, *class, *search_index, caps)?;
            let status = if rep.confirmed {
                Status::Ok
            } else if rep.capped.is_some() {
                Status::Capped
            } else {
                Status::Negative
            };
            let mut text = String::new();
            let _ = writeln!(text, "retraction onto free group: {}", rep.retraction_onto);
            let _ = writeln!(text, "H1 isomorphism: {}", rep.h1_isomorphism);
            for (i, t) in rep.trivial_in_class.iter().enumerate() {
                let _ = writeln!(text, "class {}: {} {}", i + 1, rep.candidate, if *t { "trivial" } else { "nontrivial" });
            }
            if let Some(n) = rep.nontrivial_in_finite_quotient {
                let _ = writeln!(text, "nontrivial in a quotient of degree {n}");
            }
            let _ = writeln!(text, "{}", if rep.confirmed { "confirmed" } else { "not confirmed" });
            Ok((status, serde_json::to_value(&rep).expect("report serializes"), text))
        }
        Command::Build { name } => {
            let (p, extra) = build(name)?;
            let mut result = json!({ "name": name, "presentation": p.serialize() });
            if let Some(x) = extra {
                result["retraction"] = x;
            }
            Ok((Status::Ok, result, p.serialize()))
        }
    }
}

fn build(name: &str) -> Result<(Presentation, Option<Value>), Failure> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let num = |a: Option<&str>| -> Result<i64, Failure> {
        a.and_then(|s| s.parse().ok())
            .ok_or_else(|| Failure::Input(format!("`{name}` needs a numeric parameter")))
    };
    Ok(match kind {
        "higman" if arg.is_none() => (higman_group(), None),
        "linkA2" if arg.is_none() => {
            let (p, h) = link_group_a2();
            let images: Vec<Value> = p
                .names()
                .iter()
                .zip(&h.hom.images)
                .map(|(n, w)| json!({ "generator": n, "image": h.hom.target.show(w) }))
                .collect();
            (p, Some(json!(images)))
        }
        "acyclic" => (acyclic_group(num(arg)?)?, None),
        "surface" => {
            let g = num(arg)?;
            let g = usize::try_from(g).map_err(|_| Failure::Input("genus must be positive".into()))?;
            (surface_group(g)?, None)
        }
        _ => {
            return Err(Failure::Input(format!(
                "unknown construction `{name}`; expected higman, acyclic:p, linkA2 or surface:g"
            )))
        }
    })
}

fn nq(p: &Presentation, class: u32, caps: &Caps) -> Result<Done, Failure> {
    let q = nilpotent_quotient(p, class, caps)?;
    let inv = q.lcs_invariants();
    let mut text = String::new();
    for (i, f) in inv.factors.iter().enumerate() {
        let _ = writeln!(text, "G_{}/G_{}: {f}", i + 1, i + 2);
    }
    let _ = writeln!(text, "{} pc generators, Hirsch length {}", q.len(), q.hirsch_length());
    let images: Vec<Value> = p
        .names()
        .iter()
        .enumerate()
        .map(|(g, n)| json!({ "generator": n, "normal_form": q.image_of_generator(g) }))
        .collect();
    Ok((
        Status::Ok,
        json!({
            "class": q.class(),
            "length": q.len(),
            "hirsch_length": q.hirsch_length(),
            "ranks": inv.ranks(),
            "factors": inv.factors,
            "generators": q.generators(),
            "relations": q.relations_text(),
            "images": images,
        }),
        text,
    ))
}

fn genus_status(g: &GenusReport) -> Status {
    if g.all_iso() {
        Status::Ok
    } else if g.capped() && g.per_class.iter().all(|o| !matches!(o, ClassOutcome::Computed(r) if r.verdict != Verdict::Iso)) {
        Status::Capped
    } else {
        Status::Negative
    }
}

fn genus_text(g: &GenusReport) -> String {
    let mut text = String::new();
    for o in &g.per_class {
        match o {
            ClassOutcome::Computed(r) => {
                let s: Vec<String> = r.source.factors.iter().map(|f| f.to_string()).collect();
                let t: Vec<String> = r.target.factors.iter().map(|f| f.to_string()).collect();
                let verdict = match r.verdict {
                    Verdict::Iso => "iso",
                    Verdict::NotSurjective => "not surjective",
                    Verdict::InvariantMismatch => "invariant mismatch",
                };
                let _ = writeln!(text, "class {}: {verdict}  [{}] -> [{}]", r.class, s.join(", "), t.join(", "));
            }
            ClassOutcome::Capped { class, error } => {
                let _ = writeln!(text, "class {class}: not computed ({error})");
            }
        }
    }
    let _ = writeln!(text, "iso through class {} of {}", g.iso_up_to_class, g.c_max);
    text
}
