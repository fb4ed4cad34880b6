fn main() {
    std::process::exit(zmp_areas::run(std::env::args_os()));
}
