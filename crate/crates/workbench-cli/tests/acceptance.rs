//! Exit criteria.  One line per criterion; failing criteria are followed by
//! the individual findings.  Exits nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use actions_crossed_products::{canonical_action, crossed_product, fixed_point_report, fixed_points, minimality, theta_iso};
use fd_star_algebra::linalg::{distance, re};
use fd_star_algebra::{watatani_index, Config, Element, MultiMatrixAlgebra, TraceState, Vector};
use serde_json::Value;
use tower_reconstruction::{
    build_tower_from_group, canonical_element, classify, deform, deform_tower, find_isomorphism, identity_suite,
    reconstruct, structure_distance, twisted_bundle, undeform, TowerData, IDENTITY_NAMES,
};
use weak_hopf_core::{
    connectedness, double_dual_residual, dual_algebra, function_algebra, group_algebra, haar_functional,
    haar_projection, pair_groupoid, verify_axioms, Classification, FiniteGroup, WeakHopfData,
};

const TOL: f64 = 1e-9;
const DOUBLE_DUAL_TOL: f64 = 1e-12;
const NON_MULTIPLICATIVITY: f64 = 1e-3;

/// Findings of one criterion.
#[derive(Default)]
struct Gate {
    failures: Vec<String>,
    notes: Vec<String>,
    checked: usize,
}

impl Gate {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn at_most(&mut self, what: &str, residual: f64, tol: f64) {
        self.require(residual <= tol, || format!("{what}: residual {residual:.3e} > {tol:.0e}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn run<T, E: std::fmt::Display>(&mut self, what: &str, r: std::result::Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => {
                self.checked += 1;
                Some(v)
            }
            Err(e) => {
                self.require(false, || format!("{what}: {e}"));
                None
            }
        }
    }
}

fn cfg() -> Config {
    Config { tol: TOL, seed: 0 }
}

fn groups() -> Vec<(String, FiniteGroup)> {
    let mut v: Vec<(String, FiniteGroup)> =
        (2..=5).map(|n| (format!("Z/{n}"), FiniteGroup::cyclic(n).unwrap())).collect();
    v.push(("S3".into(), FiniteGroup::symmetric(3).unwrap()));
    v
}

fn tower_groups() -> Vec<(String, FiniteGroup)> {
    groups().into_iter().filter(|(n, _)| n != "Z/5").collect()
}

fn tower(g: &FiniteGroup) -> TowerData {
    build_tower_from_group(g, &cfg()).expect("group tower")
}

fn generator_soundness() -> Gate {
    let mut g = Gate::default();
    let mut cases: Vec<(String, WeakHopfData)> =
        (1..=3).map(|n| (format!("pair_groupoid({n})"), pair_groupoid(n).unwrap())).collect();
    for (name, grp) in groups() {
        cases.push((format!("C[{name}]"), group_algebra(&grp, &cfg()).unwrap().data));
        if name != "S3" {
            cases.push((format!("C^{name}"), function_algebra(&grp).unwrap()));
        }
    }
    for (name, w) in &cases {
        let ax = verify_axioms(w, TOL);
        g.require(ax.report.passed(), || format!("{name}: {:?}", ax.report.failures()));
        g.at_most(&format!("{name} max residual"), ax.report.max_residual(), TOL);
        if name.starts_with("pair_groupoid") {
            g.require(ax.classification == Classification::WeakKac, || format!("{name}: {}", ax.classification));
            g.require(ax.s_squared == 0.0, || format!("{name}: S^2 - id = {:.3e}, expected exactly 0", ax.s_squared));
        }
    }
    g.note(format!("{} structures", cases.len()));
    g
}

fn integrals() -> Gate {
    let mut g = Gate::default();
    for n in 1..=3 {
        let w = pair_groupoid(n).unwrap();
        let name = format!("pair_groupoid({n})");
        if let Some(p) = g.run(&name, haar_projection(&w, TOL)) {
            let oracle = Vector::from_element(n * n, re(1.0 / n as f64));
            g.at_most(&format!("{name}: p = (1/n) sum E_ij"), distance(p.as_slice(), oracle.as_slice()), TOL);
        }
        if let Some(phi) = g.run(&name, haar_functional(&w, TOL)) {
            let oracle = Vector::from_fn(n * n, |i, _| {
                let (_, k, l) = w.algebra.locate(i);
                re(if k == l { 1.0 } else { 0.0 })
            });
            g.at_most(&format!("{name}: phi(E_ij) = delta_ij"), distance(phi.as_slice(), oracle.as_slice()), TOL);
        }
    }
    for (name, grp) in groups() {
        let ga = group_algebra(&grp, &cfg()).unwrap();
        let name = format!("C[{name}]");
        if let Some(p) = g.run(&name, haar_projection(&ga.data, TOL)) {
            g.at_most(&format!("{name}: p = average of G"), distance(p.as_slice(), ga.average().as_slice()), TOL);
        }
        if let Some(phi) = g.run(&name, haar_functional(&ga.data, TOL)) {
            let worst = (0..grp.order())
                .map(|x| (phi.dot(&ga.element(x)) - re(if x == grp.identity() { 1.0 } else { 0.0 })).norm())
                .fold(0.0, f64::max);
            g.at_most(&format!("{name}: phi(g) = delta_ge"), worst, TOL);
        }
        let fun = function_algebra(&grp).unwrap();
        g.run(&format!("C^{} projection", grp.name), haar_projection(&fun, TOL));
        g.run(&format!("C^{} functional", grp.name), haar_functional(&fun, TOL));
    }
    g
}

fn duality() -> Gate {
    let mut g = Gate::default();
    let mut cases: Vec<(String, WeakHopfData)> =
        (1..=3).map(|n| (format!("pair_groupoid({n})"), pair_groupoid(n).unwrap())).collect();
    for (name, grp) in groups() {
        cases.push((format!("C[{name}]"), group_algebra(&grp, &cfg()).unwrap().data));
        cases.push((format!("C^{name}"), function_algebra(&grp).unwrap()));
    }
    let mut worst = 0.0_f64;
    for (name, w) in &cases {
        if let Some(r) = g.run(name, double_dual_residual(w, &cfg())) {
            worst = worst.max(r);
            g.at_most(&format!("{name}: double dual"), r, DOUBLE_DUAL_TOL);
        }
    }
    for n in 2..=5 {
        let ga = group_algebra(&FiniteGroup::cyclic(n).unwrap(), &cfg()).unwrap();
        if let Some(d) = g.run("dual", dual_algebra(&ga.data, &cfg())) {
            let alg = &d.data.algebra;
            g.require(alg.is_commutative() && alg.dim() == n, || {
                format!("dual of C[Z/{n}] has blocks {:?}", alg.blocks())
            });
        }
    }
    g.note(format!("worst double-dual residual {worst:.3e}"));
    g
}

fn connectedness_criterion() -> Gate {
    let mut g = Gate::default();
    for n in 2..=5 {
        let ga = group_algebra(&FiniteGroup::cyclic(n).unwrap(), &cfg()).unwrap();
        if let Some(c) = g.run(&format!("C[Z/{n}]"), connectedness(&ga.data, &cfg())) {
            g.require(c.biconnected, || format!("C[Z/{n}] not biconnected"));
        }
    }
    for n in 2..=3 {
        if let Some(c) = g.run(&format!("pair_groupoid({n})"), connectedness(&pair_groupoid(n).unwrap(), &cfg())) {
            g.require(c.connected && !c.dual_connected, || {
                format!("pair_groupoid({n}): connected {}, dual connected {}", c.connected, c.dual_connected)
            });
        }
    }
    // the two criteria are compared inside `connectedness`; disagreement is an error
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let extra = [
        ("pair_groupoid(1)".to_string(), pair_groupoid(1).unwrap()),
        ("C[S3]".to_string(), group_algebra(&s3, &cfg()).unwrap().data),
        ("C^S3".to_string(), function_algebra(&s3).unwrap()),
        ("C^Z/4".to_string(), function_algebra(&FiniteGroup::cyclic(4).unwrap()).unwrap()),
    ];
    for (name, w) in &extra {
        if let Some(c) = g.run(name, connectedness(w, &cfg())) {
            g.require(c.report.passed(), || format!("{name}: criteria disagree"));
        }
    }
    g
}

fn tower_premises() -> Gate {
    let mut g = Gate::default();
    for (name, grp) in tower_groups() {
        let t = tower(&grp);
        let r = tower_reconstruction::verify_tower_premises(&t, TOL);
        g.require(r.passed(), || format!("{name}: {:?}", r.failures().iter().map(|c| &c.name).collect::<Vec<_>>()));
        g.at_most(&format!("{name} max residual"), r.max_residual(), TOL);
        g.require(1.0 / t.lambda == grp.order() as f64, || format!("{name}: 1/lambda = {}", 1.0 / t.lambda));
    }
    g
}

fn reconstruction() -> Gate {
    let mut g = Gate::default();
    for (name, grp) in tower_groups() {
        let t = tower(&grp);
        let Some(r) = g.run(&name, reconstruct(&t, &cfg())) else { continue };
        let suite = identity_suite(&t, &r, TOL);
        g.require(suite.checks.len() == IDENTITY_NAMES.len() && suite.checks.len() == 17, || {
            format!("{name}: {} identities", suite.checks.len())
        });
        g.require(suite.passed(), || format!("{name}: {:?}", suite.failures().iter().map(|c| &c.name).collect::<Vec<_>>()));
        for row in ["target(b) = E_M1(b e2) / lambda", "S_B(b) = E_M'(e1 e2 E_M1(b e1 e2)) / lambda^3"] {
            match r.report.get(row) {
                Some(c) => g.at_most(&format!("{name}: {row}"), c.residual, TOL),
                None => g.require(false, || format!("{name}: no row {row}")),
            }
        }
        g.at_most(&format!("{name}: H = 1"), r.h_defect(), TOL);
        if let Some(c) = g.run(&name, classify(&t, &r, TOL)) {
            g.require(c.classification == Classification::WeakKac, || format!("{name}: {}", c.classification));
            for row in ["Haar projection = e2", "Haar functional = d tau"] {
                match c.report.get(row) {
                    Some(k) => g.at_most(&format!("{name}: {row}"), k.residual, TOL),
                    None => g.require(false, || format!("{name}: no row {row}")),
                }
            }
            g.require(c.integral, || format!("{name}: index {} not integral", c.index));
        }
    }

    // ℤ/2: the stated intertwiner B → pair_groupoid(2)
    let t = tower(&FiniteGroup::cyclic(2).unwrap());
    let r = reconstruct(&t, &cfg()).unwrap();
    let pg = pair_groupoid(2).unwrap();
    match find_isomorphism(&r.on_b, &pg, TOL) {
        Ok(Some(iso)) => g.at_most("Z/2: B isomorphic to pair_groupoid(2)", iso.residual, TOL),
        Ok(None) => {
            g.require(false, || {
                format!(
                    "Z/2: no isomorphism B -> pair_groupoid(2): B has blocks {:?} (commutative), pair_groupoid(2) is M2 with blocks {:?}",
                    r.on_b.algebra.blocks(),
                    pg.algebra.blocks()
                )
            });
            if let Ok(Some(iso)) = find_isomorphism(&r.on_a, &pg, TOL) {
                g.note(format!(
                    "Z/2: A = N' cap M1 is isomorphic to pair_groupoid(2) (intertwiner residual {:.3e})",
                    iso.residual
                ));
            }
            let dual = dual_algebra(&pg, &cfg()).unwrap();
            if let Ok(Some(iso)) = find_isomorphism(&r.on_b, &dual.data, TOL) {
                g.note(format!(
                    "Z/2: B is isomorphic to the dual of pair_groupoid(2), the functions on the pair groupoid (residual {:.3e})",
                    iso.residual
                ));
            }
        }
        Err(e) => g.require(false, || format!("Z/2 isomorphism search: {e}")),
    }
    g
}

fn canonical_element_arithmetic() -> Gate {
    let mut g = Gate::default();
    let alg = MultiMatrixAlgebra::diagonal(2);
    let tr = TraceState::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
    if let Some(h) = g.run("canonical element", canonical_element(&alg, &tr, 2)) {
        g.at_most("H = (3/2, 3/4)", (h[0] - re(1.5)).norm().max((h[1] - re(0.75)).norm()), 1e-15);
        g.at_most("tau(H) = 1", (tr.eval(&alg, &h) - re(1.0)).norm(), 1e-15);
    }
    for (name, grp) in tower_groups() {
        let t = tower(&grp);
        let Some(r) = g.run(&name, reconstruct(&t, &cfg())) else { continue };
        let w = &r.on_b;
        // S_B(1₍₁₎)1₍₂₎ directly from the coproduct of the unit
        let pairs = w.coproduct(&w.unit());
        let mut direct = w.algebra.zero();
        for j1 in 0..w.dim() {
            for j2 in 0..w.dim() {
                let c = pairs[(j1, j2)];
                if c.norm() > 0.0 {
                    direct += w.mul(&w.antipode_of(&w.algebra.basis(j1)), &w.algebra.basis(j2)) * c;
                }
            }
        }
        let bt_trace = t.b_t.restrict_trace(&t.tau).unwrap();
        let index = watatani_index(t.b_t.sub(), &bt_trace).unwrap() * re(1.0 / t.d as f64);
        let lhs = t.b_t.map(&index);
        let rhs: Element = t.b.map(&direct);
        g.at_most(&format!("{name}: Index(tau|B_t)/d = S_B(1(1))1(2)"), distance(lhs.as_slice(), rhs.as_slice()), TOL);
        g.at_most(&format!("{name}: reconstructed H"), distance(r.h.as_slice(), direct.as_slice()), TOL);
    }
    g
}

fn deformation() -> Gate {
    let mut g = Gate::default();
    let pg = pair_groupoid(2).unwrap();
    let diag = |a: f64, b: f64| Element::from_vec(vec![re(a), re(0.0), re(0.0), re(b)]);
    for (a, b) in [(1.5, 0.75), (2.0, 0.5), (1.0 / 3.0, 5.0 / 3.0)] {
        let name = format!("h = ({a:.4}, {b:.4})");
        let Some((tw, rep)) = g.run(&name, undeform(&pg, &diag(a, b), TOL)) else { continue };
        g.require(rep.passed(), || format!("{name}: undeform report {:?}", rep.failures()));
        let bundle = twisted_bundle(&tw, TOL);
        g.require(bundle.passed(), || format!("{name}: bundle {:?}", bundle.failures()));
        g.at_most(&format!("{name}: bundle"), bundle.max_residual(), TOL);
        let mult = verify_axioms(&tw.data, TOL).report.get("comultiplication multiplicative").map_or(0.0, |c| c.residual);
        g.require(mult >= NON_MULTIPLICATIVITY, || format!("{name}: non-multiplicativity {mult:.3e} < 1e-3"));
        let Some(back) = g.run(&name, deform(&tw, TOL)) else { continue };
        g.at_most(&format!("{name}: deform recovers the original"), structure_distance(&back.data, &pg), TOL);
        g.require(back.axioms.classification != Classification::Invalid, || format!("{name}: deformed axioms fail"));
        g.at_most(&format!("{name}: deformed axioms"), back.axioms.report.max_residual(), TOL);
        match back.report.get("S~^2 = Ad(G)") {
            Some(c) => g.at_most(&format!("{name}: S~^2 = Ad(G)"), c.residual, TOL),
            None => g.require(false, || format!("{name}: no S~^2 row")),
        }
    }
    for (name, grp) in tower_groups() {
        let t = tower(&grp);
        let Some(r) = g.run(&name, reconstruct(&t, &cfg())) else { continue };
        let Some(def) = g.run(&name, deform_tower(&t, &r, TOL)) else { continue };
        g.require(def.report.passed(), || format!("{name}: {:?}", def.report.failures()));
        match def.report.get("deformed Haar projection = e2 H") {
            Some(c) => g.at_most(&format!("{name}: Haar projection = e2 H"), c.residual, TOL),
            None => g.require(false, || format!("{name}: no Haar row")),
        }
    }
    g
}

fn crossed_products() -> Gate {
    let mut g = Gate::default();
    for (name, grp) in tower_groups() {
        let t = tower(&grp);
        let Some(r) = g.run(&name, reconstruct(&t, &cfg())) else { continue };
        let Some(def) = g.run(&name, deform_tower(&t, &r, TOL)) else { continue };
        let Some(act) = g.run(&format!("{name}: canonical action"), canonical_action(&t, &def, &cfg())) else { continue };
        g.require(act.report.passed(), || format!("{name}: {:?}", act.report.failures()));
        if let Some(fixed) = g.run(&format!("{name}: fixed points"), fixed_points(&act.action, &cfg())) {
            if let Some(fr) = g.run(&name, fixed_point_report(&t, &fixed, TOL)) {
                g.require(fr.passed(), || format!("{name}: fixed points {:?}", fr.failures()));
            }
        }
        let Some(cp) = g.run(&format!("{name}: crossed product"), crossed_product(&act.action, &cfg())) else { continue };
        g.require(cp.dim() == t.ambient.dim(), || format!("{name}: dim {} vs {}", cp.dim(), t.ambient.dim()));
        g.require(cp.report.passed(), || format!("{name}: {:?}", cp.report.failures()));
        if let Some(th) = g.run(&format!("{name}: theta"), theta_iso(&t, &def, &cp, &cfg())) {
            g.require(th.rank == cp.dim(), || format!("{name}: rank {}", th.rank));
            g.require(th.report.passed(), || format!("{name}: theta {:?}", th.report.failures()));
        }
        let m = minimality(&cp, &cfg());
        g.require(m.minimal && m.commutant_dim == m.source_dim && m.report.passed(), || {
            format!("{name}: commutant {} vs B_s {}", m.commutant_dim, m.source_dim)
        });
    }
    g
}

fn cli(bin: &Path, args: &[&str]) -> Output {
    Command::new(bin).args(args).output().expect("run workbench")
}

fn edit(path: &Path, out: &Path, f: impl FnOnce(&mut Value)) {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    f(&mut v);
    std::fs::write(out, serde_json::to_string(&v).unwrap()).unwrap();
}

fn negative_controls() -> Gate {
    let mut g = Gate::default();
    let bin = Path::new(env!("CARGO_BIN_EXE_workbench"));
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s);
    let s = |q: &Path| q.to_str().unwrap().to_string();

    let gen = cli(bin, &["gen", "pair-groupoid", "2", "--out", &s(&p("pg2.json"))]);
    let tow = cli(bin, &["tower", "from-group", "cyclic", "2", "--out", &s(&p("z2.json"))]);
    g.require(gen.status.success() && tow.status.success(), || "could not generate inputs".into());

    // sanity: the uncorrupted inputs pass
    let ok1 = cli(bin, &["verify-wha", &s(&p("pg2.json"))]);
    let ok2 = cli(bin, &["reconstruct", &s(&p("z2.json"))]);
    g.require(ok1.status.code() == Some(0) && ok2.status.code() == Some(0), || "clean inputs rejected".into());

    edit(&p("pg2.json"), &p("broken_counit.json"), |v| {
        let e = &mut v["payload"]["epsilon"][1][0];
        *e = serde_json::json!(e.as_f64().unwrap() + 0.5);
    });
    edit(&p("z2.json"), &p("non_markov.json"), |v| v["payload"]["tau"] = serde_json::json!([0.3, 0.2]));
    edit(&p("z2.json"), &p("non_projection.json"), |v| {
        let e2 = v["payload"]["e2"].as_array_mut().unwrap();
        for z in e2.iter_mut() {
            let re = z[0].as_f64().unwrap();
            z[0] = serde_json::json!(2.0 * re);
        }
    });
    let cases = [
        ("broken counit", vec!["verify-wha", "broken_counit.json"], "left counit"),
        ("non-Markov trace", vec!["reconstruct", "non_markov.json"], "tau(x e2) = lambda tau(x) on M1"),
        ("non-projection e2", vec!["reconstruct", "non_projection.json"], "e2 not a projection"),
    ];
    for (label, args, named) in cases {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".json") { s(&p(a)) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = cli(bin, &args);
        let err = String::from_utf8_lossy(&out.stderr);
        let code = out.status.code().unwrap_or(-1);
        g.require(code != 0 && err.contains(named), || format!("{label}: exit {code}, stderr {err:?}"));
        g.note(format!("{label}: exit {code}, names \"{named}\""));
    }
    g
}

type Criterion = (&'static str, fn() -> Gate);

fn main() {
    let criteria: [Criterion; 10] = [
        ("generator soundness", generator_soundness),
        ("integrals", integrals),
        ("duality involution", duality),
        ("connectedness", connectedness_criterion),
        ("tower premises", tower_premises),
        ("reconstruction", reconstruction),
        ("canonical element arithmetic", canonical_element_arithmetic),
        ("deformation", deformation),
        ("actions and crossed products", crossed_products),
        ("negative controls", negative_controls),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let gate = f();
        let ok = gate.failures.is_empty();
        let mark = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {:2} [{mark}] {name}: {} checks, {} failing ({:.1}s)",
            k + 1,
            gate.checked,
            gate.failures.len(),
            t0.elapsed().as_secs_f64()
        );
        if !ok {
            failed += 1;
            for f in &gate.failures {
                println!("      ✗ {f}");
            }
            for n in &gate.notes {
                println!("      note: {n}");
            }
        }
    }
    println!(
        "{} of {} criteria pass ({:.1}s)",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
