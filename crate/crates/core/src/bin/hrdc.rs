fn main() {
    std::process::exit(hrdc::cli::main());
}
