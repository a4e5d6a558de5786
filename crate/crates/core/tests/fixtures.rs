//! Generators must reproduce the shipped fixture files byte for byte.

use std::path::PathBuf;

use contractnet::constructions::{
    build_thm4, build_thm5, build_thm6, snake_m4_instance, ConstructedInstance, Parity,
};
use contractnet::deal::RationalityClass;
use contractnet::hypercube::fixtures;
use contractnet::instance_file::InstanceFile;

fn shipped(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).expect("fixture present")
}

fn render(inst: &ConstructedInstance) -> String {
    InstanceFile::from_instance(inst)
        .unwrap()
        .to_json()
        .unwrap()
}

#[test]
fn generators_equal_fixtures() {
    let snake = fixtures::snake_s3();
    let cases = [
        ("snake_m4.json", snake_m4_instance()),
        ("ext_ir_s3.json", build_thm4(&snake, Parity::Even).unwrap()),
        (
            "ext_cr_s3.json",
            build_thm5(
                &snake,
                RationalityClass::CooperativelyRational,
                Parity::Even,
            )
            .unwrap(),
        ),
        (
            "ext_equitable_s3.json",
            build_thm5(&snake, RationalityClass::Equitable, Parity::Even).unwrap(),
        ),
        (
            "rounds_k4_s3.json",
            build_thm6(4, 3, &fixtures::cycle_s3(), None).unwrap(),
        ),
    ];
    for (name, inst) in cases {
        assert_eq!(render(&inst), shipped(name), "{name}");
    }
}

#[test]
fn fixtures_load_and_round_trip() {
    for name in [
        "snake_m4.json",
        "ext_ir_s3.json",
        "ext_cr_s3.json",
        "ext_equitable_s3.json",
        "rounds_k4_s3.json",
    ] {
        let text = shipped(name);
        let file = InstanceFile::from_json(&text).unwrap();
        assert_eq!(file.to_json().unwrap(), text);
        let again = InstanceFile::from_instance(&file.to_instance().unwrap()).unwrap();
        assert_eq!(again, file, "{name}");
    }
}
