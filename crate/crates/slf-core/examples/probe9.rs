use slf_core::bqctl::{build_apt, CheckPlan};
use slf_core::func::Registry;
use slf_core::limits::Limits;
use slf_core::nondet::{nondeterminize, universalize};
use slf_core::parse::parse_qctl;
use slf_core::predicate::Predicate;
use slf_core::kripke::Wks;
use slf_core::rat::Rat;
use slf_core::tree::{Pbf, TreeAlphabet};
use std::time::Instant;

fn pbf_size(p: &Pbf) -> usize {
    match p {
        Pbf::True | Pbf::False | Pbf::Atom(_) => 1,
        Pbf::And(v) | Pbf::Or(v) => 1 + v.iter().map(pbf_size).sum::<usize>(),
    }
}

fn main() {
    let reg = Registry::builtin();
    let lim = Limits::default();
    let k = Wks::build(
        vec!["p".into(), "q".into()],
        vec!["k0".into(), "k1".into()],
        "k0",
        &[("k0".into(), "k1".into()), ("k0".into(), "k0".into()), ("k1".into(), "k1".into())],
        vec![vec![Rat::ONE, Rat::ZERO], vec![Rat::ZERO, Rat::ONE]],
    ).unwrap();
    let free: Vec<String> = vec!["p".into(), "q".into()];
    let alphabet = TreeAlphabet::for_wks(&k, &free, &lim).unwrap();
    println!("outer alphabet letters: {}", alphabet.n_letters());

    // inner body of exists t: min(E X t, exists u . min(u, max(t, p)))
    let body = parse_qctl("min(E X t, exists u . min(u, max(t, p)))", &reg).unwrap();
    let ext = alphabet.extend_boolean("t", &lim).unwrap();
    println!("extended letters: {}", ext.n_letters());
    let mut plan = CheckPlan::new();
    let t0 = Instant::now();
    let a = build_apt(&body, &ext, &Predicate::singleton(Rat::ONE), &mut plan, &lim).unwrap();
    let tsize: usize = a.trans.iter().flat_map(|row| row.iter().map(pbf_size)).sum();
    println!("A_{{=1}}: {} states, total pbf size {} in {:?}", a.n_states, tsize, t0.elapsed());

    let t0 = Instant::now();
    let n = nondeterminize(&a, &lim).unwrap();
    let tsize: usize = n.0.trans.iter().flat_map(|row| row.iter().map(pbf_size)).sum();
    println!("nondet: {} states, total pbf size {} in {:?}", n.0.n_states, tsize, t0.elapsed());

    let t0 = Instant::now();
    let b = build_apt(&body, &ext, &Predicate::at_most(Rat::ONE), &mut plan, &lim).unwrap();
    println!("A_{{<=1}}: {} states in {:?}", b.n_states, t0.elapsed());
    let t0 = Instant::now();
    let u = universalize(&b, &lim).unwrap();
    let tsize: usize = u.0.trans.iter().flat_map(|row| row.iter().map(pbf_size)).sum();
    println!("univ: {} states, total pbf size {} in {:?}", u.0.n_states, tsize, t0.elapsed());
}
