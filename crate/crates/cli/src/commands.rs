use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};
use vkf_core::char_class::{symbolic_sphere_height, wk_classes, INDEX_CONVENTION_NOTE};
use vkf_core::cohomology::{betti_numbers, sw_height, HeightOptions, HeightReport};
use vkf_core::complex::CORPUS;
use vkf_core::deleted_product::{
    from_vertex_involution, swap_quotient, triangulated_deleted_product, QuotientComplex, QuotientDocument,
    QUOTIENT_FORMAT,
};
use vkf_core::obstruction::{certify_height_bound, enumerate_claims, CertificationStatus};
use vkf_core::pl_oracle::{find_coincidence_pair, random_rational_map, PLMap, Rational};
use vkf_core::retraction::check_retraction_properties;
use vkf_core::{
    DeltaComplexLike, Error, ManifoldModel, MemoryBudget, Result, Simplex, SimplicialComplex, StandardComplex,
};

use crate::report::{sha256_hex, InputDigest, Report};
use crate::{Command, ComplexArg, CorpusAction, Outcome};

enum Input {
    Complex {
        k: SimplicialComplex,
        standard: Option<StandardComplex>,
    },
    Quotient(QuotientComplex),
}

fn read_file(path: &str) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))
}

fn load_input(arg: &ComplexArg, report: &mut Report) -> Result<Input> {
    let input = match StandardComplex::from_str(&arg.complex) {
        Ok(standard) => {
            let k = standard.build()?;
            report
                .inputs
                .push(InputDigest::new("complex", &arg.complex, k.to_json().as_bytes()));
            Input::Complex {
                k,
                standard: Some(standard),
            }
        }
        Err(_) if Path::new(&arg.complex).is_file() => {
            let bytes = read_file(&arg.complex)?;
            report
                .inputs
                .push(InputDigest::new("complex", &arg.complex, &bytes));
            let text = String::from_utf8(bytes).map_err(|_| Error::Parse("input is not UTF-8".into()))?;
            let value: Value = serde_json::from_str(&text)?;
            if value.get("format").and_then(Value::as_str) == Some(QUOTIENT_FORMAT) {
                let doc: QuotientDocument = serde_json::from_value(value)?;
                Input::Quotient(QuotientComplex::from_document(&doc)?)
            } else {
                Input::Complex {
                    k: SimplicialComplex::from_json(&text)?,
                    standard: None,
                }
            }
        }
        Err(e) => return Err(e),
    };
    Ok(match (input, arg.skeleton) {
        (Input::Complex { k, standard }, Some(n)) => Input::Complex {
            k: k.skeleton(n),
            standard: standard.filter(|_| n >= k.dim()),
        },
        (Input::Quotient(_), Some(_)) => {
            return Err(Error::Usage(
                "--skeleton applies to complexes, not quotient files".into(),
            ))
        }
        (input, None) => input,
    })
}

fn load_complex(
    arg: &ComplexArg,
    report: &mut Report,
) -> Result<(SimplicialComplex, Option<StandardComplex>)> {
    match load_input(arg, report)? {
        Input::Complex { k, standard } => Ok((k, standard)),
        Input::Quotient(_) => Err(Error::Usage("this command needs a simplicial complex".into())),
    }
}

fn load_model(spec: &str, report: &mut Report) -> Result<ManifoldModel> {
    match ManifoldModel::standard(spec) {
        Ok(m) => {
            report
                .inputs
                .push(InputDigest::new("model", spec, spec.as_bytes()));
            Ok(m)
        }
        Err(_) if Path::new(spec).is_file() => {
            let bytes = read_file(spec)?;
            report.inputs.push(InputDigest::new("model", spec, &bytes));
            let text = String::from_utf8(bytes).map_err(|_| Error::Parse("model is not UTF-8".into()))?;
            ManifoldModel::from_json(&text)
        }
        Err(e) => Err(e),
    }
}

fn complex_summary(k: &SimplicialComplex) -> Value {
    json!({
        "dimension": k.dim(),
        "f_vector": k.f_vector(),
        "euler_characteristic": k.euler_characteristic(),
    })
}

fn labels(k: &SimplicialComplex, s: &Simplex) -> Vec<String> {
    k.simplex_labels(s).iter().map(ToString::to_string).collect()
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn height_timings(report: &mut Report, h: &HeightReport) {
    report.timings.insert("height_ms".into(), h.millis.into());
    report.timings.insert(
        "degree_ms".into(),
        h.degrees.iter().map(|d| d.millis).collect::<Vec<_>>().into(),
    );
}

/// Quotient plus a description of how it was obtained, after checking the
/// structural invariants of the free complex.
fn build_quotient(
    input: Input,
    antipodal: bool,
    equivariant_skeleton: Option<usize>,
    result: &mut serde_json::Map<String, Value>,
) -> Result<QuotientComplex> {
    let (k, standard) = match input {
        Input::Quotient(q) => {
            if antipodal || equivariant_skeleton.is_some() {
                return Err(Error::Usage(
                    "--antipodal and --equivariant-skeleton need a simplicial complex".into(),
                ));
            }
            q.verify_cocycle()?;
            result.insert("construction".into(), "quotient-file".into());
            return Ok(q);
        }
        Input::Complex { k, standard } => (k, standard),
    };
    result.insert("complex".into(), complex_summary(&k));
    let mut x = if antipodal {
        let pairing = standard
            .and_then(StandardComplex::antipodal_pairing)
            .ok_or_else(|| {
                Error::Usage("--antipodal needs a built-in cross_polytope_boundary complex".into())
            })?;
        result.insert("construction".into(), "antipodal".into());
        from_vertex_involution(&k, &pairing)?
    } else {
        result.insert("construction".into(), "deleted-product".into());
        triangulated_deleted_product(&k)
    };
    if let Some(n) = equivariant_skeleton {
        x = x.skeleton(n);
    }
    x.verify(if antipodal { None } else { Some(&k) })?;
    let q = swap_quotient(&x)?;
    q.verify_cocycle()?;
    let (chi_x, chi_q) = (x.euler_characteristic(), q.euler_characteristic());
    if chi_x != 2 * chi_q {
        return Err(Error::Integrity(format!(
            "Euler characteristics {chi_x} and {chi_q} are not in ratio 2"
        )));
    }
    result.insert(
        "free_complex".into(),
        json!({ "simplex_counts": x.simplex_counts(), "euler_characteristic": chi_x }),
    );
    Ok(q)
}

fn quotient_summary(q: &QuotientComplex) -> Value {
    json!({ "simplex_counts": q.simplex_counts(), "euler_characteristic": q.euler_characteristic() })
}

pub(crate) fn dispatch(
    command: Command,
    budget: &MemoryBudget,
    argv: Vec<String>,
) -> Result<(Outcome, Report)> {
    let started = Instant::now();
    let name = match &command {
        Command::Height { .. } => "height",
        Command::Delprod { .. } => "delprod",
        Command::Wk { .. } => "wk",
        Command::Claims { .. } => "claims",
        Command::Certify { .. } => "certify",
        Command::Radon { .. } => "radon",
        Command::RetractCheck { .. } => "retract-check",
        Command::Corpus { .. } => "corpus",
    };
    let mut report = Report::new(name, argv);
    let mut outcome = Outcome::Done;
    let mut result = serde_json::Map::new();

    match command {
        Command::Height {
            input,
            max_degree,
            antipodal,
            equivariant_skeleton,
            all_degrees,
        } => {
            let input = load_input(&input, &mut report)?;
            let q = build_quotient(input, antipodal, equivariant_skeleton, &mut result)?;
            result.insert("quotient".into(), quotient_summary(&q));
            let opts = HeightOptions {
                max_degree,
                early_stop: !all_degrees,
                budget: *budget,
            };
            let h = sw_height(&q, &opts)?;
            height_timings(&mut report, &h);
            result.insert("height".into(), serde_json::to_value(&h)?);
        }
        Command::Delprod { input, emit, betti } => {
            let input = load_input(&input, &mut report)?;
            let q = build_quotient(input, false, None, &mut result)?;
            result.insert("quotient".into(), quotient_summary(&q));
            if betti {
                result.insert("quotient_betti_mod2".into(), betti_numbers(&q)?.into());
            }
            if let Some(path) = emit {
                let text = serde_json::to_string(&q.to_document())? + "\n";
                std::fs::write(&path, &text)?;
                result.insert(
                    "emitted".into(),
                    json!({ "path": path.display().to_string(), "sha256": sha256_hex(text.as_bytes()) }),
                );
            }
        }
        Command::Wk { model, k } => {
            let m = load_model(&model, &mut report)?;
            let alg = &m.algebra;
            let classes = wk_classes(&m, k)?;
            let sym = symbolic_sphere_height(&m)?;
            result.insert("model".into(), model_summary(&m));
            result.insert("k".into(), k.into());
            result.insert(
                "by_index".into(),
                classes
                    .by_index
                    .iter()
                    .enumerate()
                    .map(|(i, c)| json!({ "i": i + 1, "degree": i + 1 + k, "value": alg.format(c) }))
                    .collect::<Vec<_>>()
                    .into(),
            );
            result.insert(
                "by_degree".into(),
                classes
                    .by_degree
                    .iter()
                    .map(|(j, c)| json!({ "degree": j, "value": alg.format(c) }))
                    .collect::<Vec<_>>()
                    .into(),
            );
            result.insert("total".into(), alg.format(&classes.total).into());
            result.insert("nontrivial".into(), classes.nontrivial.into());
            result.insert("index_convention".into(), INDEX_CONVENTION_NOTE.into());
            result.insert("symbolic_sphere_height".into(), serde_json::to_value(sym)?);
        }
        Command::Claims { model, dim, strict } => {
            let m = load_model(&model, &mut report)?;
            let claims = enumerate_claims(&m, dim)?;
            if strict && claims.is_empty() {
                outcome = Outcome::Unsatisfied;
            }
            result.insert("model".into(), model_summary(&m));
            result.insert("manifold_dim".into(), dim.into());
            result.insert("claims".into(), serde_json::to_value(&claims)?);
        }
        Command::Certify {
            input,
            dim,
            k,
            model,
            max_degree,
            strict,
        } => {
            let (complex, standard) = load_complex(&input, &mut report)?;
            let model_spec = model.or_else(|| standard.and_then(StandardComplex::model_name));
            let m = match &model_spec {
                Some(spec) => Some(load_model(spec, &mut report)?),
                None => None,
            };
            let opts = HeightOptions {
                max_degree,
                early_stop: true,
                budget: *budget,
            };
            let r = certify_height_bound(&complex, dim, k, m.as_ref(), &opts)?;
            if strict && r.status != CertificationStatus::Certified {
                outcome = Outcome::Unsatisfied;
            }
            height_timings(&mut report, &r.height);
            result.insert("certification".into(), serde_json::to_value(&r)?);
        }
        Command::Radon {
            input,
            map,
            random,
            target,
            bound,
            range,
            strict,
        } => {
            let (complex, _) = load_complex(&input, &mut report)?;
            let f = match (map, random) {
                (Some(path), _) => {
                    let source = path.display().to_string();
                    let bytes = read_file(&source)?;
                    report.inputs.push(InputDigest::new("map", &source, &bytes));
                    let text =
                        String::from_utf8(bytes).map_err(|_| Error::Parse("map is not UTF-8".into()))?;
                    let f = PLMap::from_json(complex, &text)?;
                    result.insert("map".into(), json!({ "source": "file", "path": source }));
                    f
                }
                (None, Some(seed)) => {
                    let range = parse_range(&range)?;
                    let f = random_rational_map(&complex, target, seed, range)?;
                    result.insert(
                        "map".into(),
                        json!({ "source": "random", "seed": seed, "range": [range.0, range.1] }),
                    );
                    f
                }
                (None, None) => return Err(Error::Usage("give --map or --random".into())),
            };
            if f.target_dim() != target {
                return Err(Error::Usage(format!(
                    "the map goes to R^{}, not R^{target}",
                    f.target_dim()
                )));
            }
            let bound = bound.unwrap_or(target);
            result.insert("target_dim".into(), target.into());
            result.insert("bound".into(), bound.into());
            result.insert(
                "coordinates".into(),
                serde_json::to_value(f.to_document().coordinates)?,
            );
            let k = f.complex();
            let found = find_coincidence_pair(&f, bound);
            if strict && found.is_none() {
                outcome = Outcome::Unsatisfied;
            }
            result.insert(
                "coincidence".into(),
                match found {
                    None => Value::Null,
                    Some(p) => json!({
                        "sigma": labels(k, &p.sigma),
                        "tau": labels(k, &p.tau),
                        "dim_sum": p.sigma.dim() + p.tau.dim(),
                        "point": rationals(&p.witness.point),
                        "lambda": rationals(&p.witness.lambda),
                        "mu": rationals(&p.witness.mu),
                        "verified": p.witness.verify(&f, &p.sigma, &p.tau),
                    }),
                },
            );
        }
        Command::RetractCheck { input, samples, seed } => {
            let (complex, _) = load_complex(&input, &mut report)?;
            let r = check_retraction_properties(&complex, samples, seed)?;
            result.insert("complex".into(), complex_summary(&complex));
            result.insert("passed".into(), r.passed().into());
            result.insert("retraction".into(), serde_json::to_value(&r)?);
            if !r.passed() {
                report.result = Value::Object(result);
                eprintln!("{}", report.to_pretty_json());
                return Err(Error::Integrity(format!(
                    "{} retraction checks failed",
                    r.failure_count
                )));
            }
        }
        Command::Corpus {
            action: CorpusAction::List,
        } => {
            let mut entries = Vec::new();
            for e in CORPUS {
                let k = e.load()?;
                let pm = k.check_closed_pseudomanifold();
                entries.push(json!({
                    "name": e.name,
                    "description": e.description,
                    "manifold_dim": e.manifold_dim,
                    "model": e.model,
                    "f_vector": k.f_vector(),
                    "euler_characteristic": k.euler_characteristic(),
                    "pseudomanifold_check": pm.passed(),
                    "sha256": sha256_hex(k.to_json().as_bytes()),
                }));
            }
            result.insert("corpus".into(), entries.into());
            result.insert(
                "families".into(),
                json!(["simplex:N", "boundary_simplex:N", "cross_polytope_boundary:D"]),
            );
        }
    }
    report.result = Value::Object(result);
    report
        .timings
        .insert("command_ms".into(), (started.elapsed().as_millis() as u64).into());
    Ok((outcome, report))
}

fn model_summary(m: &ManifoldModel) -> Value {
    json!({
        "name": m.name(),
        "dimension": m.dim(),
        "top_degree": m.algebra.top_degree(),
        "w": m.w.iter().map(|wi| m.algebra.format(wi)).collect::<Vec<_>>(),
        "total_class": m.algebra.format(&m.total_class()),
    })
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Usage(format!("range must look like LO:HI, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}
