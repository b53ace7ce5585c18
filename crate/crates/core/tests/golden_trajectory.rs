use dwtsp::dynamics::{generate_sequence, DynamicsConfig};

#[test]
fn ones_trajectory_is_frozen() {
    let cfg = DynamicsConfig { lower: 30, upper: 70, magnitude: 5, tau: 10_000, epochs: 30, seed: 42 };
    let seq = generate_sequence(500, &cfg).unwrap();
    let got: String = seq.ones_trajectory().iter().map(|k| format!("{k}\n")).collect();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/ones_m500_L30_U70_c5_s42.txt");
    if std::env::var_os("DWTSP_BLESS").is_some() {
        std::fs::write(path, &got).unwrap();
    }
    let want = std::fs::read_to_string(path).expect("golden file present");
    assert_eq!(got, want);
}
