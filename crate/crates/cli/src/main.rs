fn main() {
    std::process::exit(stabshare_cli::run(std::env::args_os()));
}
