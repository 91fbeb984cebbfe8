

// comment only line

const spaced = 1;
	
let tabbed = 2;

