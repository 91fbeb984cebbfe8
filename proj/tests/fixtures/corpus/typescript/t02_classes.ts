abstract class Repository<T> {
  protected items: T[] = [];
  abstract find(id: number): T | undefined;
}

class UserRepository extends Repository<string> {
  find(id: number): string | undefined {
    return this.items[id];
  }
}
