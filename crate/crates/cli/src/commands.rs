use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use arctensor::forms::{vanishes_on, vanishing_subspace};
use arctensor::geometry::{self, mds_check, Arc};
use arctensor::sbbt::{build_sbbt, verify_sbbt, SbbtForm};
use arctensor::suite::run_suite;
use arctensor::tangents::verify_lemma_of_tangents;
use arctensor::tensorform::{
    build_tensor_form, quadric_check, search_exact_correction, shift_extract, verify_tensor_form, MultiForm,
};
use arctensor::{Check, Error, Field, MultiIndex, Report, TangentSystem};
use serde_json::{json, Value};

use crate::{ArcCmd, ArcType, Cli, Command, SbbtCmd, TangentsCmd, TensorCmd};

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_arc(path: &Path) -> Result<Arc> {
    Arc::from_json(&read_json(path)?).with_context(|| format!("loading arc {}", path.display()))
}

fn load_system(arc: &Arc, path: Option<&Path>) -> Result<TangentSystem> {
    Ok(match path {
        Some(p) => TangentSystem::from_json(arc, &read_json(p)?).with_context(|| format!("loading {}", p.display()))?,
        None => TangentSystem::build(arc)?,
    })
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn arc_check(arc: &Arc) -> Result<Check> {
    let chk = arc.verify()?;
    let mut c = Check::new("is_arc");
    c.record(chk.is_arc, || json!({ "dependent_subset": chk.witness }));
    Ok(c)
}

pub fn run(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Arc(cmd) => run_arc(cmd),
        Command::Phi { arc, t } => {
            let a = load_arc(arc)?;
            let field = a.field();
            let phi = vanishing_subspace(field, a.k(), a.points(), *t)?;
            let mut report = Report::new("phi", json!({ "arc": path_str(arc), "t": t }));
            let mut c = Check::new("basis_vanishes_on_arc");
            let forms = phi.forms();
            for (i, f) in forms.iter().enumerate() {
                c.record(vanishes_on(field, f, a.points())?, || json!({ "basis_row": i }));
            }
            report.push(c);
            report.observe("dim", json!(phi.dim()));
            report.observe("basis", Value::Array(forms.iter().map(|f| f.to_json(field)).collect()));
            Ok(report)
        }
        Command::Tangents(TangentsCmd::Build { arc, out }) => {
            let a = load_arc(arc)?;
            let ts = TangentSystem::build(&a)?;
            write_json(out, &ts.to_json())?;
            let mut report = Report::new("tangents build", json!({ "arc": path_str(arc), "output": path_str(out) }));
            report.observe("subsets", json!(ts.forms().count()));
            report.observe("t", json!(a.t()));
            Ok(report)
        }
        Command::Tangents(TangentsCmd::LemmaCheck { arc, system }) => {
            let a = load_arc(arc)?;
            let ts = load_system(&a, system.as_deref())?;
            let mut report = verify_lemma_of_tangents(&ts, seed)?;
            report.inputs = json!({ "arc": path_str(arc), "system": system.as_deref().map(path_str), "seed": seed });
            Ok(report)
        }
        Command::Tensor(cmd) => run_tensor(cmd),
        Command::Sbbt(SbbtCmd::Build { arc, out }) => {
            let a = load_arc(arc)?;
            let sb = build_sbbt(&a, &TangentSystem::build(&a)?)?;
            write_json(out, &sb.to_json(a.field()))?;
            let mut report = Report::new("sbbt build", json!({ "arc": path_str(arc), "output": path_str(out) }));
            report.observe("m", json!(sb.m));
            report.observe("degree", json!(sb.phi.degree()));
            Ok(report)
        }
        Command::Sbbt(SbbtCmd::Verify { arc, form }) => {
            let a = load_arc(arc)?;
            let ts = TangentSystem::build(&a)?;
            let sb = match form {
                Some(p) => SbbtForm::from_json(a.field(), &read_json(p)?)?,
                None => build_sbbt(&a, &ts)?,
            };
            let mut report = verify_sbbt(&a, &ts, &sb, seed)?;
            report.inputs = json!({ "arc": path_str(arc), "form": form.as_deref().map(path_str), "seed": seed });
            Ok(report)
        }
        Command::Suite { arc } => {
            let a = load_arc(arc)?;
            let mut report = run_suite(&a, seed)?;
            report.inputs["arc"] = json!(path_str(arc));
            Ok(report)
        }
    }
}

fn run_arc(cmd: &ArcCmd) -> Result<Report> {
    match cmd {
        ArcCmd::New { kind, q, k, points, out } => {
            let field = Field::with_order(*q)?;
            let fixed_plane = |name: &str| -> Result<()> {
                match k {
                    Some(k) if *k != 3 => bail!("{name} arcs live in PG(2, q); got --k {k}"),
                    _ => Ok(()),
                }
            };
            if points.is_some() && *kind != ArcType::Custom {
                bail!("--points is only used with --type custom");
            }
            let arc = match kind {
                ArcType::Nrc => {
                    let k = k.context("--type nrc needs --k")?;
                    geometry::normal_rational_curve(&field, k)?
                }
                ArcType::Conic => {
                    fixed_plane("conic")?;
                    geometry::conic(&field)?
                }
                ArcType::Hyperoval => {
                    fixed_plane("hyperoval")?;
                    geometry::hyperoval(&field)?
                }
                ArcType::Custom => {
                    let k = k.context("--type custom needs --k")?;
                    let path = points.as_ref().context("--type custom needs --points")?;
                    let list = read_json(path)?;
                    let reps = list
                        .as_array()
                        .context("--points file must hold a JSON array of points")?
                        .iter()
                        .map(|p| field.vector_from_json(p))
                        .collect::<arctensor::Result<Vec<_>>>()?;
                    Arc::new(field.clone(), k, reps)?
                }
            };
            write_json(out, &arc.to_json())?;
            let mut report = Report::new(
                "arc new",
                json!({ "type": format!("{kind:?}").to_lowercase(), "q": q, "k": arc.k(), "output": path_str(out) }),
            );
            report.push(arc_check(&arc)?);
            report.observe("n", json!(arc.len()));
            report.observe("t", json!(arc.t()));
            Ok(report)
        }
        ArcCmd::Verify { arc } => {
            let a = Arc::from_json_unchecked(&read_json(arc)?)?;
            let mut report = Report::new("arc verify", json!({ "arc": path_str(arc) }));
            report.push(arc_check(&a)?);
            let mut size = Check::new("spans");
            size.record(a.len() >= a.k(), || json!({ "n": a.len(), "k": a.k() }));
            report.push(size);
            report.observe("n", json!(a.len()));
            report.observe("t", json!(a.t()));
            Ok(report)
        }
        ArcCmd::Project { arc, index, out } => {
            let a = load_arc(arc)?;
            let p = geometry::project(&a, *index)?;
            write_json(out, &p.to_json())?;
            let mut report =
                Report::new("arc project", json!({ "arc": path_str(arc), "index": index, "output": path_str(out) }));
            report.push(arc_check(&p)?);
            let mut same_t = Check::new("t_preserved");
            same_t.record(p.t() == a.t(), || json!({ "before": a.t(), "after": p.t() }));
            report.push(same_t);
            Ok(report)
        }
        ArcCmd::Mds { arc } => {
            let a = Arc::from_json_unchecked(&read_json(arc)?)?;
            let mds = mds_check(&a);
            let field = a.field();
            let mut report = Report::new("arc mds", json!({ "arc": path_str(arc) }));
            let mut c = Check::new("all_maximal_minors_nonzero");
            c.record(mds.is_mds, || json!({ "columns": mds.witness }));
            report.push(c);
            let rows: Vec<Value> = mds.generator.row_vecs().map(|r| field.vector_to_json(r)).collect();
            report.observe("generator", Value::Array(rows));
            report.observe("code", json!({ "n": a.len(), "k": a.k(), "d": a.len() + 1 - a.k() }));
            Ok(report)
        }
    }
}

fn parse_exponents(text: &str) -> Result<Vec<MultiIndex>> {
    let v: Vec<Vec<u32>> = serde_json::from_str(text).context("--exponents must be a JSON array of integer arrays")?;
    Ok(v.into_iter().map(MultiIndex::new).collect())
}

fn load_form(arc: &Arc, path: Option<&Path>) -> Result<MultiForm> {
    Ok(match path {
        Some(p) => {
            MultiForm::from_json(arc.field(), &read_json(p)?).with_context(|| format!("loading {}", p.display()))?
        }
        None => build_tensor_form(arc, &TangentSystem::build(arc)?)?,
    })
}

fn run_tensor(cmd: &TensorCmd) -> Result<Report> {
    match cmd {
        TensorCmd::Build { arc, out } => {
            let a = load_arc(arc)?;
            let f = build_tensor_form(&a, &TangentSystem::build(&a)?)?;
            write_json(out, &f.to_json(a.field()))?;
            let mut report = Report::new("tensor build", json!({ "arc": path_str(arc), "output": path_str(out) }));
            report.observe("blocks", json!(f.blocks()));
            report.observe("t", json!(f.degree()));
            report.observe("entries", json!(f.coeffs().len()));
            Ok(report)
        }
        TensorCmd::Verify { arc, form, search_exact } => {
            let a = load_arc(arc)?;
            let ts = TangentSystem::build(&a)?;
            let f = load_form(&a, form.as_deref())?;
            let mut report = verify_tensor_form(&a, &ts, &f)?;
            report.inputs =
                json!({ "arc": path_str(arc), "form": form.as_deref().map(path_str), "search_exact": search_exact });
            if *search_exact {
                let found = match search_exact_correction(&a, &ts, &f) {
                    Ok(s) => s.to_json(),
                    Err(Error::PreconditionFailed(reason)) => json!({ "not_run": reason }),
                    Err(e) => return Err(e.into()),
                };
                report.observe("exact_correction_search", found);
            }
            Ok(report)
        }
        TensorCmd::Extract { arc, exponents, form } => {
            let a = load_arc(arc)?;
            let field = a.field();
            let f = load_form(&a, form.as_deref())?;
            let exps = parse_exponents(exponents)?;
            let g = shift_extract(field, &f, &exps)?;
            let dim = vanishing_subspace(field, a.k(), a.points(), a.t())?.dim();
            let vanishes = vanishes_on(field, &g, a.points())?;
            let mut report = Report::new("tensor extract", json!({ "arc": path_str(arc), "exponents": exponents }));
            report.observe("dim_phi_t", json!(dim));
            report.observe("form", g.to_json(field));
            if dim == 0 {
                let mut c = Check::new("vanishes_on_arc");
                c.record(vanishes, || json!({ "exponents": exponents }));
                report.push(c);
            } else {
                report.observe("vanishes_on_arc_unasserted", json!(vanishes));
            }
            Ok(report)
        }
        TensorCmd::QuadricCheck { arc } => {
            let a = load_arc(arc)?;
            let qc = quadric_check(&a)?;
            let field = a.field();
            let mut report = Report::new("tensor quadric-check", json!({ "arc": path_str(arc) }));
            let mut c = Check::new("quadric_through_arc");
            let ok = match &qc.form {
                Some(f) => !f.is_zero() && vanishes_on(field, f, a.points())?,
                None => false,
            };
            c.record(ok, || json!({ "dim_phi_2": qc.dim }));
            report.push(c);
            report.observe("dim_phi_2", json!(qc.dim));
            if let Some(f) = &qc.form {
                report.observe("quadric", f.to_json(field));
            }
            Ok(report)
        }
    }
}
