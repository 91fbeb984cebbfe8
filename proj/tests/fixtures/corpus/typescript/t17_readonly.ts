interface Config {
  readonly url: string;
}

class Client {
  constructor(private readonly config: Config) {}
  get url(): string {
    return this.config.url;
  }
}
