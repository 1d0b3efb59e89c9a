fn main() {
    std::process::exit(thetacat::cli::main_with(std::env::args()));
}
