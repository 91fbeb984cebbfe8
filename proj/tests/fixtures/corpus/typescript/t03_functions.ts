function greet(name: string): string {
  return `hi ${name}`;
}

const shout = (s: string): string => s.toUpperCase();
const whisper = function (s: string): string {
  return s.toLowerCase();
};
