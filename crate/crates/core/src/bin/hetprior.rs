fn main() {
    std::process::exit(hetprior::cli::run(std::env::args_os()));
}
