fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(cubal::cli::run(&args));
}
