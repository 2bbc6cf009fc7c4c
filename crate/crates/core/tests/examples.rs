macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(ou_paths, "ou_paths.rs");
example!(green_function, "green_function.rs");
example!(wave_attenuation, "wave_attenuation.rs");
example!(continued_fraction, "continued_fraction.rs");
example!(laplace_inversion, "laplace_inversion.rs");
example!(closed_forms, "closed_forms.rs");
example!(envelope_fit, "envelope_fit.rs");
example!(run_config, "run_config.rs");

#[test]
fn examples_run() {
    ou_paths::run_example().unwrap();
    green_function::run_example().unwrap();
    wave_attenuation::run_example().unwrap();
    continued_fraction::run_example().unwrap();
    laplace_inversion::run_example().unwrap();
    closed_forms::run_example().unwrap();
    envelope_fit::run_example().unwrap();
    run_config::run_example().unwrap();
}
