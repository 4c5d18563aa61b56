use std::time::Instant;

use zw::rules::{
    axiom_instances, check_rule, derived_instances, load_catalogue, mutate_crossings, mutate_sign, Bounds,
    RuleInstance, AXIOM_FILE, DERIVED_FILE,
};
use zw::{BigInt, GaussianRational, Scalar, Zn};

fn all_pass<S: Scalar>(rules: &[RuleInstance<S>]) {
    let failed: Vec<String> = rules.iter().map(check_rule).filter(|r| !r.pass).map(|r| r.to_string()).collect();
    assert!(failed.is_empty(), "failing instances:\n{}", failed.join("\n"));
}

#[test]
fn axioms_sound_over_integers_and_gaussians() {
    let start = Instant::now();
    let b = Bounds::default();
    let z = axiom_instances::<BigInt>(&b).unwrap();
    let q = axiom_instances::<GaussianRational>(&b).unwrap();
    assert!(z.len() >= 200 && q.len() > z.len(), "{} and {} instances", z.len(), q.len());
    all_pass(&z);
    all_pass(&q);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn axioms_sound_mod_n() {
    let b = Bounds::default();
    all_pass(&axiom_instances::<Zn<3>>(&b).unwrap());
    all_pass(&axiom_instances::<Zn<4>>(&b).unwrap());
}

#[test]
fn derived_rules_hold() {
    let b = Bounds::default();
    let z = derived_instances::<BigInt>(&b).unwrap();
    let q = derived_instances::<GaussianRational>(&b).unwrap();
    for name in
        ["xnat", "ba_w", "ba_zw", "aut", "lp", "sum", "crossminus", "hopf", "negation", "trace", "absorption", "tensor"]
    {
        assert!(q.iter().any(|r| r.name == name), "no {name} instance");
    }
    all_pass(&z);
    all_pass(&q);
}

#[test]
fn named_instances() {
    let b = Bounds { label_samples: vec!["2".into(), "3".into()], ..Bounds::default() };
    let ax = axiom_instances::<BigInt>(&b).unwrap();
    let rng_plus = ax.iter().find(|r| r.name == "rng_+" && r.params == "r=2,s=3").expect("rng_+ 2,3");
    assert!(rng_plus.lhs.render().contains("[5]") || rng_plus.rhs.render().contains("[5]"));
    assert!(check_rule(rng_plus).pass);
    assert!(ax.iter().any(|r| r.name == "rei_x_2" && check_rule(r).pass));
    let ba = ax.iter().find(|r| r.name == "ba_zw" && r.params == "n=0,m=1,r=3").expect("ba_zw 0,1,3");
    assert!(check_rule(ba).pass);

    let der = derived_instances::<BigInt>(&Bounds::default()).unwrap();
    let sum = der.iter().find(|r| r.name == "sum" && r.rhs.render().contains("[6]")).expect("sum 1,2,3");
    assert!(check_rule(sum).pass);
    assert!(der.iter().any(|r| r.name == "lp" && r.params.starts_with("n=3") && check_rule(r).pass));
    assert!(der.iter().any(|r| r.name == "aut" && r.params == "n=0" && check_rule(r).pass));
}

#[test]
fn catalogue_records_reload() {
    let b = Bounds::default();
    let labels = b.labels::<GaussianRational>();
    let fixed = load_catalogue::<GaussianRational>(AXIOM_FILE, &labels).unwrap();
    let text: String = fixed.iter().map(|r| r.record() + "\n").collect();
    let again = load_catalogue::<GaussianRational>(&text, &labels).unwrap();
    assert_eq!(fixed, again);
    assert!(!load_catalogue::<BigInt>(DERIVED_FILE, &b.labels()).unwrap().is_empty());
}

#[test]
fn catalogue_errors() {
    assert!(load_catalogue::<BigInt>("bad | - | cup | id\n", &[]).is_err());
    assert!(load_catalogue::<BigInt>("bad | - | cup\n", &[]).is_err());
    assert!(load_catalogue::<BigInt>("bad | - | cup ; | cup\n", &[]).is_err());
}

#[test]
fn sign_flips_are_caught() {
    let b = Bounds::default();
    let rules = axiom_instances::<BigInt>(&b).unwrap();
    let mut caught = 0;
    for r in &rules {
        let m = mutate_sign(r);
        let rep = check_rule(&m);
        let lhs_zero = zw::semantics::interpret(&r.lhs, 2).unwrap().is_empty();
        assert_eq!(rep.pass, lhs_zero, "{}", rep);
        if !rep.pass {
            assert!(rep.witness.is_some());
            caught += 1;
        }
    }
    assert!(caught >= 10);
}

#[test]
fn crossing_swaps_are_caught() {
    let rules = axiom_instances::<BigInt>(&Bounds::default()).unwrap();
    let rei = rules.iter().find(|r| r.name == "nat_x_w").unwrap();
    let rep = check_rule(&mutate_crossings(rei));
    assert!(!rep.pass && rep.witness.is_some());
}
