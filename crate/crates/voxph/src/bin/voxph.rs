fn main() -> std::process::ExitCode {
    voxph::cli::main()
}
