macro_rules! example {
    ($module:ident, $test:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(prime_field, prime_field_example_runs, "prime_field.rs");
example!(extension_field, extension_field_example_runs, "extension_field.rs");
example!(conway, conway_example_runs, "conway.rs");
example!(normalize_literals, normalize_literals_example_runs, "normalize_literals.rs");
example!(solve_script, solve_script_example_runs, "solve_script.rs");
example!(differential, differential_example_runs, "differential.rs");
