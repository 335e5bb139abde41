// Runs every example end to end and checks what it reports.

#[allow(dead_code)]
mod mirror_response {
    include!("../examples/mirror_response.rs");
}
#[allow(dead_code)]
mod single_cavity {
    include!("../examples/single_cavity.rs");
}
#[allow(dead_code)]
mod three_mirror_splitting {
    include!("../examples/three_mirror_splitting.rs");
}
#[allow(dead_code)]
mod cascaded_spectrum {
    include!("../examples/cascaded_spectrum.rs");
}
#[allow(dead_code)]
mod peak_delta {
    include!("../examples/peak_delta.rs");
}
#[allow(dead_code)]
mod field_profile {
    include!("../examples/field_profile.rs");
}
#[allow(dead_code)]
mod dark_modes {
    include!("../examples/dark_modes.rs");
}
#[allow(dead_code)]
mod parameter_matching {
    include!("../examples/parameter_matching.rs");
}

#[test]
fn mirror_response_reflectivity() {
    let rows = mirror_response::run().unwrap();
    let (_, r5) = rows.iter().find(|(z, _)| *z == 5.0).unwrap();
    assert!((r5 - 25.0 / 26.0).abs() < 1e-15);
}

#[test]
fn single_cavity_lines() {
    for line in single_cavity::run().unwrap() {
        assert!((line.peak - 1.0).abs() < 1e-9);
        assert!((line.center - line.omega_c).abs() < 1e-3 * line.kappa);
        assert!((line.half_width / line.kappa - 1.0).abs() < 0.01, "zeta {}", line.zeta);
    }
}

#[test]
fn three_mirror_doublet() {
    let (split, two_g) = three_mirror_splitting::run().unwrap();
    assert!((split / two_g - 1.0).abs() < 0.01);
}

#[test]
fn cascaded_triplets_share_the_middle_peak() {
    let (s, c) = cascaded_spectrum::run().unwrap();
    assert!((s[1] - c[1]).abs() < 1e-9);
    assert!(s[0] < c[0] && c[2] < s[2]);
}

#[test]
fn peak_delta_shrinks() {
    let entries = peak_delta::run().unwrap();
    let ratios: Vec<f64> = entries.iter().map(|e| e.delta_mean_over_kappa().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn field_profile_middle_resonance_skips_fiber() {
    let peaks = field_profile::run().unwrap();
    let middle = peaks[1];
    assert!(middle[1] > 20.0 && middle[3] > 20.0);
    assert!(middle[2] < 1.5);
    assert!(peaks[0][2] > 10.0);
}

#[test]
fn dark_modes_interfere_almost_perfectly() {
    let (_, fit) = dark_modes::run().unwrap();
    assert!(fit.contrast_ratio() < 1e-3);
    assert!(fit.c0 - fit.c1 > 0.0);
}

#[test]
fn parameter_matching_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = parameter_matching::run(dir.path()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!((json["kappa"].as_f64().unwrap() - 0.019611613513818404).abs() < 1e-15);
    assert_eq!(json["fiber"]["n_f"].as_u64(), Some(50));
}
