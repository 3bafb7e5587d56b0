fn main() {
    std::process::exit(virtbraid::cli::run(std::env::args_os()));
}
