fn main() {
    std::process::exit(opplod::cli::cli_main(std::env::args()));
}
