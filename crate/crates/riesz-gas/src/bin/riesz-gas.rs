fn main() {
    std::process::exit(riesz_gas::cli::run_cli(std::env::args_os()));
}
