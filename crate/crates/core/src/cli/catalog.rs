//! `catalog`: the full table of groups, comparison maps and products of a cone.

use serde_json::{json, Value};

use super::{input, CliError, Report};
use crate::abgroup::IntMatrix;
use crate::cone::{zobel, ConeClass, ConeError, ConeVariety, Mode, ZobelCatalog};
use crate::verdict::Verdict;

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k == i)).collect()
}

fn generators(cone: &ConeVariety, r: u32, p: u32) -> Result<Vec<ConeClass>, ConeError> {
    let rank = cone.chow_group(r.into(), p)?.rank();
    (0..rank).map(|i| cone.class(r.into(), p, unit(rank, i))).collect()
}

struct Product {
    value: Value,
    table: Option<Vec<Vec<Vec<i64>>>>,
    degrees: Option<IntMatrix>,
    error: Option<ConeError>,
}

fn product_entry(cone: &ConeVariety, (r, p): (u32, u32), (s, q): (u32, u32)) -> Result<Product, ConeError> {
    let ga = generators(cone, r, p)?;
    let gb = generators(cone, s, q)?;
    let case = match (cone.mode(r, p), cone.mode(s, q)) {
        (Mode::Allowed, Mode::Allowed) => 1,
        (Mode::Disallowed, Mode::Disallowed) => 3,
        _ => 2,
    };
    let mut value = json!({"a": [r, p], "b": [s, q], "case": case});
    let first = match (ga.first(), gb.first()) {
        (Some(x), Some(y)) => x.intersect(y),
        _ => Err(ConeError::DimensionOutOfRange { r: -1, d: cone.dim() }),
    };
    let result = match first {
        Ok(k) => k,
        Err(e) => {
            value["error"] = json!(e.to_string());
            return Ok(Product { value, table: None, degrees: None, error: Some(e) });
        }
    };
    let mut table = Vec::with_capacity(ga.len());
    for x in &ga {
        let row = gb
            .iter()
            .map(|y| x.intersect(y).map(|k| k.payload().coeffs().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(row);
    }
    value["result"] = json!({"r": result.r(), "p": result.p(), "mode": result.mode()});
    value["table"] = json!(table);
    let degrees = if result.payload().dimension() == Some(0) {
        let mut m = IntMatrix::zeros(ga.len(), gb.len());
        for (i, x) in ga.iter().enumerate() {
            for (j, y) in gb.iter().enumerate() {
                m[(i, j)] = x.degree_pairing(y)?;
            }
        }
        value["degrees"] = json!(m.to_rows());
        Some(m)
    } else {
        None
    };
    Ok(Product { value, table: Some(table), degrees, error: None })
}

fn class_value(k: &ConeClass) -> Value {
    json!({"r": k.r(), "p": k.p(), "mode": k.mode(), "payload": k.payload().coeffs()})
}

/// Builds the catalog report of a cone, checking the Zobel values when asked.
pub fn catalog_report(name: &str, verify: bool) -> Result<Report, CliError> {
    let cone = input::cone(name)?;
    let z = zobel();
    let is_zobel = cone == z.cone;
    if verify && !is_zobel {
        return Err(CliError::Input { what: "catalog", message: format!("--verify knows expected values only for zobel, not {name:?}") });
    }
    let dom = |e: ConeError| CliError::domain("catalog", e);
    let d = cone.dim() as u32;
    let mut report = Report::new("catalog");
    report.value("cone", json!({"base": cone.base().name(), "dim": d}));

    let mut groups = Vec::new();
    for r in 0..=d {
        for p in 0..d {
            let g = cone.chow_group(r.into(), p).map_err(dom)?;
            let factors = g.invariant_factors().map_err(|e| CliError::domain("catalog", e))?;
            groups.push(json!({"r": r, "p": p, "mode": cone.mode(r, p), "factors": factors.to_string()}));
        }
    }
    report.value("groups", groups);

    let mut comparisons = Vec::new();
    for r in 0..=d {
        for from in 0..d {
            for to in from + 1..d {
                if cone.mode(r, from) != cone.mode(r, to) {
                    let m = cone.comparison_map(r.into(), from, to).map_err(dom)?;
                    comparisons.push(json!({"r": r, "from": from, "to": to, "matrix": m.matrix().to_rows()}));
                }
            }
        }
    }
    report.value("comparisons", comparisons);

    let mut products = Vec::new();
    let mut entries = Vec::new();
    for r in 1..d {
        for s in r..d {
            if r + s < d {
                continue;
            }
            for p in 0..d {
                for q in 0..d {
                    if r == s && q < p {
                        continue;
                    }
                    let e = product_entry(&cone, (r, p), (s, q)).map_err(dom)?;
                    products.push(e.value.clone());
                    entries.push(((r, p), (s, q), e));
                }
            }
        }
    }
    report.value("products", products);

    if is_zobel {
        let named = |k: &ConeClass| class_value(k);
        report.value(
            "classes",
            json!({"L": named(&z.l), "M": named(&z.m), "N": named(&z.n), "D": named(&z.d), "Q": named(&z.q)}),
        );
        let dl = z.d.intersect(&z.l).map_err(dom)?;
        let dm = z.d.intersect(&z.m).map_err(dom)?;
        report.value(
            "named",
            json!([
                {"pair": "D.L", "class": class_value(&dl), "degree": dl.payload().degree().map_err(|e| CliError::domain("catalog", e))?},
                {"pair": "D.M", "class": class_value(&dm), "degree": dm.payload().degree().map_err(|e| CliError::domain("catalog", e))?},
            ]),
        );
        if verify {
            verify_zobel(&z, &entries, &mut report).map_err(dom)?;
        }
    }
    Ok(report)
}

type Entry = ((u32, u32), (u32, u32), Product);

fn find(entries: &[Entry], a: (u32, u32), b: (u32, u32)) -> Option<&Product> {
    entries.iter().find(|(x, y, _)| *x == a && *y == b).map(|(_, _, e)| e)
}

fn verify_zobel(z: &ZobelCatalog, entries: &[Entry], report: &mut Report) -> Result<(), ConeError> {
    let y = &z.cone;
    let factors = |r: i64, p: u32| -> Result<String, ConeError> { Ok(y.chow_group(r, p)?.invariant_factors()?.to_string()) };

    let expected = [(2, 1, "Z + Z"), (2, 2, "Z + Z"), (2, 0, "Z"), (1, 0, "Z + Z"), (1, 1, "Z + Z"), (1, 2, "Z")];
    let mut failures = Vec::new();
    for (r, p, want) in expected {
        let got = factors(r, p)?;
        if got != want {
            failures.push(format!("A_{{{r},{p}}} = {got}, expected {want}"));
        }
    }
    report.verdict(Verdict::from_failures("zobel-groups", "A_2 = A_{2,1} = A_{2,2} = Z+Z, A_{2,0} = Z, A_{1,0} = A_{1,1} = Z+Z, A_{1,2} = Z", failures));

    let r2 = y.comparison_map(2, 0, 1)?.matrix().to_rows();
    report.verdict(Verdict::single("zobel-comparison-r2", r2 == vec![vec![1], vec![1]], format!("A_{{2,0}} -> A_{{2,1}} has matrix {r2:?}, expected 1 -> (1,1)")));
    let r1 = y.comparison_map(1, 1, 2)?.matrix().to_rows();
    report.verdict(Verdict::single("zobel-comparison-r1", r1 == vec![vec![1, 1]], format!("A_{{1,1}} -> A_{{1,2}} has matrix {r1:?}, expected (1,0) -> 1 and (0,1) -> 1")));

    let pairing = find(entries, (2, 1), (2, 1)).and_then(|e| e.degrees.clone()).map(|m| m.to_rows());
    let want = vec![vec![0, 1], vec![1, 0]];
    report.verdict(Verdict::single(
        "zobel-pairing",
        pairing.as_ref() == Some(&want),
        match &pairing {
            Some(m) => format!("A_{{2,1}} x A_{{2,1}} -> A_{{1,2}} has Gram matrix {m:?}, expected {want:?} for (a,b),(c,d) -> ad+bc"),
            None => "A_{2,1} x A_{2,1} has no degree pairing".to_string(),
        },
    ));
    let table_ok = find(entries, (2, 1), (2, 1)).and_then(|e| e.table.clone()) == Some(vec![vec![vec![0], vec![1]], vec![vec![1], vec![0]]]);
    report.verdict(Verdict::single("zobel-pairing-table", table_ok, "generator products in A_{1,2} = A_0(Q)"));

    let top = find(entries, (1, 2), (2, 2)).and_then(|e| e.error.clone());
    report.verdict(Verdict::single(
        "zobel-no-top-pairing",
        top == Some(ConeError::AllowedProductUndefined(0)),
        format!("A_{{2,2}} x A_{{1,2}} is rejected: {}", top.map(|e| e.to_string()).unwrap_or_else(|| "accepted".into())),
    ));

    let dl = z.d.intersect(&z.l)?;
    let dm = z.d.degree_pairing(&z.m)?;
    let dl_degree = dl.payload().degree()?;
    let star = z.d.joint_pattern(&z.l)?.joint().iter().all(|j| j.is_empty());
    report.verdict(Verdict::single("zobel-D.L", dl.payload().is_zero() && dl_degree == 0 && star, format!("D.L = {:?} of degree {dl_degree}, no common point at the vertex", dl.payload().coeffs())));
    report.verdict(Verdict::single("zobel-D.M", dm == 1, format!("deg D.M = {dm}, expected 1")));

    let zero = y.lift(0);
    let mut failures = Vec::new();
    for (name, k) in [("L", &z.l), ("M", &z.m)] {
        let v = k.to_pattern().explain_perversity(&zero)?;
        if !v.ok {
            failures.push(format!("{name}: {}", v.explanation));
        }
    }
    for p in 0..=2 {
        let passes = z.n.to_pattern().check_perversity(&y.lift(p))?;
        if passes != (p == 2) {
            failures.push(format!("N at p_3 = {p}: passes = {passes}"));
        }
    }
    report.verdict(Verdict::from_failures("zobel-membership", "L, M pass p = 0; N fails p_3 in {0,1} and passes p_3 = 2", failures));

    let same_top = z.l.compare_to(2)? == z.m.compare_to(2)? && z.l.compare_to(2)? == z.n;
    let distinct = !z.l.payload().equivalent(z.m.payload())?;
    report.verdict(Verdict::single("zobel-lines", same_top && distinct, "L = M = N in A_{1,2}, L != M in A_{1,0}"));
    Ok(())
}
