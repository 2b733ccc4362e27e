fn main() {
    std::process::exit(fldma::cli::run(std::env::args_os()));
}
