fn main() {
    alcove::cli::run();
}
