use slf_core::bqctl::compute_value;
use slf_core::func::Registry;
use slf_core::limits::Limits;
use slf_core::parse::parse_qctl;
use slf_core::kripke::Wks;
use slf_core::rat::Rat;
use std::time::Instant;

fn main() {
    let reg = Registry::builtin();
    let r = |n, d| Rat::new(n, d).unwrap();
    let k = Wks::build(
        vec!["p".into(), "q".into()],
        vec!["k0".into(), "k1".into(), "k2".into()],
        "k0",
        &[("k0".into(), "k1".into()), ("k0".into(), "k2".into()),
          ("k1".into(), "k1".into()), ("k2".into(), "k0".into())],
        vec![vec![r(1,2), Rat::ONE], vec![Rat::ONE, Rat::ZERO], vec![Rat::ZERO, r(1,2)]],
    ).unwrap();
    for text in [
        "exists t . min(E X t, exists u . min(u, max(t, p)))",
        "exists t . max(min(E X t, q), neg(exists u . min(u, p)))",
        "exists t . exists u . min(E X t, min(u, p))",
    ] {
        let f = parse_qctl(text, &reg).unwrap();
        let t0 = Instant::now();
        match compute_value(&f, &k, &Limits::default()) {
            Ok(v) => println!("{text}: value {v} in {:?}", t0.elapsed()),
            Err(e) => println!("{text}: ERROR {e} after {:?}", t0.elapsed()),
        }
    }
}
