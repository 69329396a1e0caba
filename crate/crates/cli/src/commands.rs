use std::fmt::Write;
use std::sync::Arc;

use serde_json::{json, Value};

use virasoro_core::arith::{Rational, RationalFunction, Scalar};
use virasoro_core::resolution::{
    cohomology_window, delta_entries, generator_levels, sigma as sigma_value, verify_resolution_identities,
    GradedAction,
};
use virasoro_core::singular::{
    annihilated_by, apply_sum, build_s2p, build_sp1, kac_params, normalize_w, recursion_w, specialize, swap_t,
    CompositionSum, KacLabel, SizeCap,
};
use virasoro_core::verma::{ModuleParams, VermaElement};
use virasoro_core::{Error, Result};

use crate::{Family, FamilyArgs, ModuleArgs, ModuleKind, Report};

type Rf = RationalFunction;

fn family_sum(args: &FamilyArgs, cap: SizeCap) -> Result<(KacLabel, CompositionSum<Rf>)> {
    let n = args.n;
    Ok(match args.family {
        Family::P1 => (KacLabel::new(n, 1), build_sp1(n, cap)?),
        Family::Oneq => (KacLabel::new(1, n), swap_t(&build_sp1(n, cap)?)?),
        Family::Twop => (KacLabel::new(2, n), build_s2p(n, cap)?),
        Family::Ptwo => (KacLabel::new(n, 2), swap_t(&build_s2p(n, cap)?)?),
    })
}

fn family_parameters(args: &FamilyArgs) -> Value {
    let name = match args.family {
        Family::P1 => "p1",
        Family::Oneq => "oneq",
        Family::Twop => "twop",
        Family::Ptwo => "ptwo",
    };
    json!({ "family": name, "n": args.n })
}

fn element_text<F: Scalar>(x: &VermaElement<F>) -> String {
    let mut out = String::new();
    for (m, c) in x.terms() {
        writeln!(out, "{m}  {c}").unwrap();
    }
    out
}

pub fn singular(args: &FamilyArgs, t: Option<&Rational>, normal_order: bool, cap: SizeCap) -> Result<Report> {
    let (label, sum) = family_sum(args, cap)?;
    let mut parameters = family_parameters(args);
    parameters["t"] = t.map_or(Value::Null, |t| json!(t.to_string()));
    parameters["normal_order"] = json!(normal_order);
    let point = t.map_or_else(|| "t".to_owned(), ToString::to_string);
    let mut text = String::new();

    let result = match (t, normal_order) {
        (None, false) => {
            writeln!(text, "{label}({point})").unwrap();
            text.push_str(&sum.to_string());
            sum.to_json()
        }
        (Some(t), false) => {
            let special = specialize(&sum, t)?;
            writeln!(text, "{label}({point})").unwrap();
            text.push_str(&special.to_string());
            special.to_json()
        }
        (None, true) => {
            let params = Arc::new(kac_params(label));
            let x = apply_sum(&sum, &VermaElement::vacuum(params));
            writeln!(text, "{label}({point}) v").unwrap();
            text.push_str(&element_text(&x));
            x.to_json()
        }
        (Some(t), true) => {
            let params = kac_params(label);
            let params = Arc::new(ModuleParams::new(params.h.evaluate_at(t)?, params.c.evaluate_at(t)?));
            let x = apply_sum(&specialize(&sum, t)?, &VermaElement::vacuum(params));
            writeln!(text, "{label}({point}) v").unwrap();
            text.push_str(&element_text(&x));
            x.to_json()
        }
    };
    Ok(Report {
        parameters,
        result,
        text,
        pass: None,
    })
}

pub fn verify(
    args: &FamilyArgs,
    depth: u32,
    h: Option<&Rational>,
    c: Option<&Rational>,
    cap: SizeCap,
) -> Result<Report> {
    let (label, sum) = family_sum(args, cap)?;
    let mut params = kac_params(label);
    if let Some(h) = h {
        params.h = Rf::constant(h.clone());
    }
    if let Some(c) = c {
        params.c = Rf::constant(c.clone());
    }
    let mut parameters = family_parameters(args);
    parameters["depth"] = json!(depth);
    parameters["h"] = json!(params.h.to_string());
    parameters["c"] = json!(params.c.to_string());

    let x = apply_sum(&sum, &VermaElement::vacuum(Arc::new(params.clone())));
    let mut text = format!("{label}(t) v in V(h = {}, c = {})\n", params.h, params.c);
    let mut checks = Vec::new();
    let nonzero = !x.is_zero();
    if !nonzero {
        text.push_str("vector is zero\n");
    }
    for k in 1..=depth.max(2) {
        let ok = annihilated_by(&x, k as i32);
        writeln!(
            text,
            "e_-{k}: {}",
            if ok { "annihilates" } else { "does not annihilate" }
        )
        .unwrap();
        checks.push(json!({ "k": k, "annihilates": ok }));
    }
    let pass = nonzero && checks.iter().all(|c| c["annihilates"] == true);
    writeln!(text, "result: {}", if pass { "pass" } else { "fail" }).unwrap();
    Ok(Report {
        parameters,
        result: json!({ "label": label.to_string(), "nonzero": nonzero, "checks": checks }),
        text,
        pass: Some(pass),
    })
}

pub fn recursion_check(p: u32, cap: SizeCap) -> Result<Report> {
    let label = KacLabel::new(2, p);
    let recursive = normalize_w(&recursion_w(p, cap)?, p)?;
    let closed = apply_sum(&build_s2p(p, cap)?, &VermaElement::vacuum(Arc::new(kac_params(label))));
    let first_difference = recursive
        .terms()
        .keys()
        .chain(closed.terms().keys())
        .filter(|m| recursive.coeff(m) != closed.coeff(m))
        .min()
        .cloned();
    let pass = first_difference.is_none();
    let mut text = format!(
        "recursion vs closed form for {label}: {}\n",
        if pass { "pass" } else { "fail" }
    );
    let difference = first_difference.map(|m| {
        let (a, b) = (recursive.coeff(&m), closed.coeff(&m));
        writeln!(text, "first difference at {m}: recursion {a}, closed form {b}").unwrap();
        json!({ "monomial": m.indices(), "recursion": a.to_json(), "closed_form": b.to_json() })
    });
    Ok(Report {
        parameters: json!({ "p": p }),
        result: json!({ "monomials": closed.terms().len(), "first_difference": difference }),
        text,
        pass: Some(pass),
    })
}

fn graded_action(args: &ModuleArgs) -> GradedAction {
    match args.module {
        ModuleKind::Trivial => GradedAction::trivial(),
        ModuleKind::Point => GradedAction::point(),
        ModuleKind::TensorDensity => GradedAction::tensor_density(args.lambda.clone(), args.mu.clone()),
    }
}

pub fn sigma(p: u32, q: u32, j: i64, module: &ModuleArgs, t: &Rational, cap: SizeCap) -> Result<Report> {
    let action = graded_action(module);
    let label = KacLabel::new(p, q);
    let value = sigma_value(label, j, &action, t, cap)?;
    Ok(Report {
        parameters: json!({ "p": p, "q": q, "j": j, "module": action.descriptor(), "t": t.to_string() }),
        result: json!(value.to_string()),
        text: format!("sigma_{{{p},{q}}}({j}) = {value}\n"),
        pass: None,
    })
}

pub fn cohomology(module: &ModuleArgs, s: (i64, i64), k_max: u32, cap: SizeCap) -> Result<Report> {
    let action = graded_action(module);
    let parameters = json!({ "module": action.descriptor(), "s": [s.0, s.1], "kmax": k_max });
    let tables = match cohomology_window(&action, s.0..=s.1, k_max, cap) {
        Ok(tables) => tables,
        Err(err @ Error::CochainViolation { .. }) => {
            return Ok(Report {
                parameters,
                result: json!({ "error": err.to_string() }),
                text: format!("{err}\n"),
                pass: Some(false),
            })
        }
        Err(err) => return Err(err),
    };
    let mut text = format!("module: {action}\n");
    for table in &tables {
        writeln!(text, "s = {}", table.s).unwrap();
        for d in &table.dims {
            writeln!(text, "  H^{}  dim {}  gradings {:?}", d.k, d.dim, d.gradings).unwrap();
        }
    }
    Ok(Report {
        parameters,
        result: Value::Array(tables.iter().map(|t| t.to_json()).collect()),
        text,
        pass: None,
    })
}

/// Every entry of `delta_k`, `k <= 5`, raises the level by the gap between
/// the generators it links.
fn delta_levels_consistent() -> bool {
    (1..=5).all(|k| {
        let sources = generator_levels(k - 1);
        let targets = generator_levels(k);
        delta_entries(k).iter().enumerate().all(|(r, row)| {
            row.iter()
                .enumerate()
                .all(|(c, e)| e.label.level() as i64 == targets[c] - sources[r])
        })
    })
}

pub fn resolution_check(identities: &[String], cap: SizeCap) -> Report {
    let names: Vec<&str> = identities.iter().map(String::as_str).collect();
    let report = verify_resolution_identities(&names, cap);
    let levels = delta_levels_consistent();
    let mut text = String::new();
    for c in &report.identities {
        let status = if c.holds { "pass" } else { "fail" };
        write!(
            text,
            "{:<4} level {:>2}  {} {} = {} {}  {status}",
            c.name, c.level, c.left.0, c.left.1, c.right.0, c.right.1
        )
        .unwrap();
        if let Some(err) = &c.error {
            write!(text, " ({err})").unwrap();
        }
        text.push('\n');
    }
    for c in &report.singular {
        writeln!(
            text,
            "{:<4} singular: {}",
            c.name,
            if c.singular { "yes" } else { "no" }
        )
        .unwrap();
    }
    writeln!(text, "delta levels (k <= 5): {}", if levels { "pass" } else { "fail" }).unwrap();
    let pass = report.all_pass() && levels;
    writeln!(text, "result: {}", if pass { "pass" } else { "fail" }).unwrap();
    let mut result = report.to_json();
    result["delta_levels"] = json!(levels);
    Report {
        parameters: json!({ "identities": names }),
        result,
        text,
        pass: Some(pass),
    }
}
