fn main() {
    std::process::exit(schottky_gem::cli::run(std::env::args_os()));
}
