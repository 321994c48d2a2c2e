fn main() {
    std::process::exit(qev::cli::run(std::env::args().skip(1)));
}
