fn main() {
    std::process::exit(dirac_pdm::cli::run(std::env::args_os()));
}
